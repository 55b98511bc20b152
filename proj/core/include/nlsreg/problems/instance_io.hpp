#pragma once

#include <string>

#include "nlsreg/problems/fh.hpp"
#include "nlsreg/problems/group_lasso.hpp"
#include "nlsreg/problems/svm.hpp"

namespace nlsreg::problems {

/// Instances are stored as JSON documents tagged with their kind, the seed and
/// the generator settings; doubles round-trip exactly.
std::string serialize(const GroupLassoInstance& instance);
std::string serialize(const SvmInstance& instance);
std::string serialize(const FHInstance& instance);

/// "group_lasso", "svm" or "fh". Throws std::runtime_error on malformed input.
std::string instance_kind(const std::string& text);

GroupLassoInstance deserialize_group_lasso(const std::string& text);
SvmInstance deserialize_svm(const std::string& text);
FHInstance deserialize_fh(const std::string& text);

}  // namespace nlsreg::problems
