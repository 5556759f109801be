#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpb/hopf.hpp"

namespace qpb {

using Json = nlohmann::json;

/// Built-in data packs: groups `suq2`, `u1`; calculi `3d`, `4d+`,
/// `u1-from-3d`, `u1-from-4d+`, `u1-line`, `u1-classical`; bases `default`,
/// `heisenberg`, `nilpotent`.
Json builtin_pack(const std::string& id);
std::vector<std::string> builtin_pack_ids();

/// Loads a pack from a file, or a built-in one when `ref` names it.
Json resolve_pack(const std::string& ref);

/// Builds a presentation from a `group` section and validates confluence.
std::shared_ptr<Presentation> load_group(const Json& pack);
std::shared_ptr<Presentation> builtin_group(const std::string& id);

/// Scalar-valued parameters substituted into packs (e.g. lambda -> 2).
using Params = std::map<int, Scalar>;
Scalar parse_scalar_param(const std::string& text, const Params& params);

}  // namespace qpb
