#include "cqmq/errors.hpp"

#include <utility>

namespace cqmq {
namespace {

std::string syntax_message(std::size_t offset, const std::vector<std::string>& expected,
                           const std::string& detail) {
  std::string msg = "syntax error at offset " + std::to_string(offset);
  if (!detail.empty()) msg += ": " + detail;
  if (!expected.empty()) {
    msg += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += ", ";
      msg += expected[i];
    }
    msg += ")";
  }
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected,
                         const std::string& detail)
    : Error(syntax_message(offset, expected, detail)),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t offset)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

}  // namespace cqmq
