#include "geodeq/error.hpp"

namespace geodeq {

SyntaxError::SyntaxError(const std::string& what, std::size_t offset)
    : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

}  // namespace geodeq
