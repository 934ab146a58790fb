#pragma once

#include <filesystem>
#include <string>

#include "tarp/ensemble.hpp"

namespace tarp {

inline constexpr int kModelFormatVersion = 1;

/// Serializes a fitted model to a self-describing JSON document. Random
/// projections are stored as (inclusion set, seed, parameters) and rebuilt on
/// load; principal-component blocks and posterior arrays are stored in full.
/// Doubles are written in shortest round-trip form, so save(load(s)) == s.
std::string serialize_model(const TarpModel& model);
TarpModel deserialize_model(const std::string& text);

void save_model(const TarpModel& model, const std::filesystem::path& path);
TarpModel load_model(const std::filesystem::path& path);

}  // namespace tarp
