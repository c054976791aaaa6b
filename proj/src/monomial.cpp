#include "momsep/monomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "momsep/errors.hpp"

namespace momsep {

namespace {

constexpr int kMaxModes = 26;

int parse_power(std::string_view token, std::size_t& pos) {
  if (pos >= token.size() || token[pos] != '^') return 1;
  ++pos;
  int value = 0;
  const char* first = token.data() + pos;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first || value < 0) {
    throw ParseError("bad exponent in factor '" + std::string(token) + "'");
  }
  pos += static_cast<std::size_t>(ptr - first);
  return value;
}

}  // namespace

std::string mode_name(int mode) {
  if (mode >= 0 && mode < kMaxModes) return std::string(1, static_cast<char>('a' + mode));
  return "m" + std::to_string(mode);
}

Monomial::Monomial(std::vector<ModePowers> powers) : powers_(std::move(powers)) {
  for (const auto& p : powers_) {
    if (p.creation < 0 || p.annihilation < 0) throw ParseError("negative ladder power");
  }
  trim();
}

void Monomial::trim() {
  while (!powers_.empty() && powers_.back() == ModePowers{}) powers_.pop_back();
}

Monomial Monomial::ladder(int mode, int creation, int annihilation) {
  if (mode < 0) throw IndexError("negative mode index");
  std::vector<ModePowers> powers(static_cast<std::size_t>(mode) + 1);
  powers.back() = {creation, annihilation};
  return Monomial(std::move(powers));
}

ModePowers Monomial::powers(int mode) const {
  if (mode < 0 || mode >= mode_span()) return {};
  return powers_[static_cast<std::size_t>(mode)];
}

std::vector<int> Monomial::support() const {
  std::vector<int> modes;
  for (int i = 0; i < mode_span(); ++i) {
    if (powers_[i] != ModePowers{}) modes.push_back(i);
  }
  return modes;
}

Monomial Monomial::adjoint() const {
  auto powers = powers_;
  for (auto& p : powers) std::swap(p.creation, p.annihilation);
  return Monomial(std::move(powers));
}

Monomial Monomial::restricted_to(const std::vector<int>& modes) const {
  std::vector<ModePowers> powers(powers_.size());
  for (int mode : modes) {
    if (mode >= 0 && mode < mode_span()) powers[mode] = powers_[mode];
  }
  return Monomial(std::move(powers));
}

Monomial operator*(const Monomial& lhs, const Monomial& rhs) {
  const int span = std::max(lhs.mode_span(), rhs.mode_span());
  std::vector<ModePowers> powers(static_cast<std::size_t>(span));
  for (int i = 0; i < span; ++i) {
    const auto l = lhs.powers(i);
    const auto r = rhs.powers(i);
    if (l.annihilation > 0 && r.creation > 0) {
      throw ParseError("product " + lhs.to_string() + " * " + rhs.to_string() +
                       " is not normally ordered on mode " + mode_name(i));
    }
    powers[i] = {l.creation + r.creation, l.annihilation + r.annihilation};
  }
  return Monomial(std::move(powers));
}

std::string Monomial::to_string() const {
  if (is_identity()) return "1";
  std::ostringstream os;
  bool first = true;
  auto emit = [&](int mode, bool dagger, int power) {
    if (power == 0) return;
    if (!first) os << ' ';
    first = false;
    os << mode_name(mode) << (dagger ? "+" : "");
    if (power != 1) os << '^' << power;
  };
  for (int i = 0; i < mode_span(); ++i) {
    emit(i, true, powers_[i].creation);
    emit(i, false, powers_[i].annihilation);
  }
  return os.str();
}

Monomial Monomial::parse(std::string_view text) {
  std::vector<ModePowers> powers;
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), '*', ' ');
  std::istringstream in(normalized);
  std::string token;
  bool any = false;
  while (in >> token) {
    any = true;
    if (token == "1") continue;
    std::size_t pos = 0;
    bool number = false;
    if (token[0] == 'N' && token.size() >= 2) {
      number = true;
      pos = 1;
    }
    if (pos >= token.size() || !std::islower(static_cast<unsigned char>(token[pos]))) {
      throw ParseError("unknown factor '" + token + "'");
    }
    const int mode = token[pos] - 'a';
    ++pos;
    if (static_cast<int>(powers.size()) <= mode) powers.resize(static_cast<std::size_t>(mode) + 1);
    auto& p = powers[static_cast<std::size_t>(mode)];
    if (number) {
      if (pos != token.size()) throw ParseError("unexpected text after '" + token.substr(0, 2) + "'");
      if (p.annihilation > 0) {
        throw ParseError("factor '" + token + "' breaks normal order on mode " + mode_name(mode));
      }
      p.creation += 1;
      p.annihilation += 1;
      continue;
    }
    const bool dagger = pos < token.size() && token[pos] == '+';
    if (dagger) ++pos;
    const int power = parse_power(token, pos);
    if (pos != token.size()) throw ParseError("unexpected text in factor '" + token + "'");
    if (dagger) {
      if (p.annihilation > 0) {
        throw ParseError("factor '" + token + "' breaks normal order on mode " + mode_name(mode));
      }
      p.creation += power;
    } else {
      p.annihilation += power;
    }
  }
  if (!any) throw ParseError("empty monomial");
  return Monomial(std::move(powers));
}

}  // namespace momsep
