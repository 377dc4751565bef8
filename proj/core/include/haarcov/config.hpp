// SPDX-License-Identifier: MIT
//
// JSON experiment configuration, schema "v1". Parsing is fail-closed: an
// unknown key anywhere in the document is an error, so a typo'd parameter can
// never silently fall back to a default. parse -> serialize -> parse is the
// identity on every field.
#pragma once

#include <string>

#include "haarcov/ratelab.hpp"

namespace haarcov {

// Parses a schema-v1 JSON document into an ExperimentSpec; throws
// std::invalid_argument with a diagnostic naming the offending key.
ExperimentSpec parse_experiment_json(const std::string& text);

// Canonical serialization: emits every field (including defaults).
std::string experiment_to_json(const ExperimentSpec& spec);

// Reads the file and parses it; throws std::runtime_error("config not found: ...")
// if the path is unreadable.
ExperimentSpec load_experiment_file(const std::string& path);

}  // namespace haarcov
