#pragma once

#include <optional>
#include <string>

#include "levelband/field.hpp"

namespace levelband {

/// Turns a command-line field designator into a field. Accepted forms, in
/// resolution order:
///   "builtin:NAME" / "builtin:NAME:p1,p2"  catalog field, explicit
///   "grid:PATH"                            sampled grid file, explicit
///   "expr:TEXT"                            expression, explicit
///   "NAME" / "NAME:p1,p2"                  catalog field by bare name
///   existing file path                     grid file
///   anything else                          expression in x, y
///
/// window overrides the field's own default; for grid fields it must lie
/// inside the sampled domain. Expressions default to [-3,3] x [-3,3].
FieldPtr make_field(const std::string& spec, const std::optional<Window>& window = {});

} // namespace levelband
