#pragma once

#include <string>

#include <json.hpp>

#include "maxent/gridworld.hpp"
#include "maxent/mdp.hpp"

namespace maxent {

inline constexpr const char* kFormatTag = "maxent-mdp/1";

using Json = nlohmann::json;

// All readers throw DomainError with a description of the offending field.
Json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const Json& j);

Json gridworld_to_json(const GridWorldSpec& spec);
GridWorldSpec gridworld_from_json(const Json& j);

// {state: {action: prob}}
Json policy_to_json(const Mdp& mdp, const StationaryPolicy& policy);
StationaryPolicy policy_from_json(const Mdp& mdp, const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

// Accepts an MDP document or a grid-world document (recognized by "width").
Mdp load_model(const std::string& path);

// Float formatting for CSV output: 12 significant digits, "inf" for infinity.
std::string format_float(double v);

}  // namespace maxent
