#include "momsep/errors.hpp"

#include <sstream>

namespace momsep {

namespace {

std::string cutoff_message(std::size_t mode, int cutoff, int required, double deficit) {
  std::ostringstream os;
  os << "insufficient cutoff on mode " << mode << ": cutoff " << cutoff
     << " leaves norm deficit " << deficit << "; cutoff " << required << " required";
  return os.str();
}

std::string missing_message(const std::vector<std::string>& missing) {
  std::ostringstream os;
  os << "missing moments:";
  for (const auto& m : missing) os << " <" << m << ">";
  return os.str();
}

}  // namespace

InsufficientCutoffError::InsufficientCutoffError(std::size_t mode, int cutoff, int required,
                                                 double deficit)
    : Error(cutoff_message(mode, cutoff, required, deficit)),
      mode_(mode),
      cutoff_(cutoff),
      required_(required),
      deficit_(deficit) {}

MissingMomentError::MissingMomentError(std::vector<std::string> missing)
    : Error(missing_message(missing)), missing_(std::move(missing)) {}

}  // namespace momsep
