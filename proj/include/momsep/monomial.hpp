#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace momsep {

struct ModePowers {
  int creation = 0;
  int annihilation = 0;

  auto operator<=>(const ModePowers&) const = default;
};

/// Normally-ordered product over modes: prod_i (a_i^dag)^{n_i} a_i^{m_i}.
///
/// Modes are numbered from 0. Powers beyond the stored span are zero, so the
/// same monomial can be used with states of any number of modes that cover
/// its support. The text form names modes a, b, c, ... and writes a creation
/// operator with a trailing '+':  "1", "a", "a+ b", "a+^2 a^2 b", "Na Nb".
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::vector<ModePowers> powers);

  static Monomial ladder(int mode, int creation, int annihilation);
  static Monomial annihilation(int mode, int power = 1) { return ladder(mode, 0, power); }
  static Monomial creation(int mode, int power = 1) { return ladder(mode, power, 0); }
  static Monomial number(int mode) { return ladder(mode, 1, 1); }

  /// Parses the text form. Each mode must appear normally ordered.
  static Monomial parse(std::string_view text);

  std::string to_string() const;

  bool is_identity() const { return powers_.empty(); }
  int mode_span() const { return static_cast<int>(powers_.size()); }
  ModePowers powers(int mode) const;
  const std::vector<ModePowers>& all_powers() const { return powers_; }

  /// Modes with a nonzero power.
  std::vector<int> support() const;

  /// Hermitian conjugate: swaps creation and annihilation powers per mode.
  Monomial adjoint() const;

  /// Keeps only the factors on the listed modes.
  Monomial restricted_to(const std::vector<int>& modes) const;

  /// Product of two monomials. Throws ParseError when the product is not
  /// normally ordered on some mode (annihilators on the left meet creators on
  /// the right).
  friend Monomial operator*(const Monomial& lhs, const Monomial& rhs);

  auto operator<=>(const Monomial&) const = default;

private:
  void trim();

  std::vector<ModePowers> powers_;
};

std::string mode_name(int mode);

}  // namespace momsep
