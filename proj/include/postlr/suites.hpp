#pragma once

#include <optional>
#include <string>
#include <vector>

#include "postlr/algebroid.hpp"
#include "postlr/braiding.hpp"
#include "postlr/checks.hpp"

namespace postlr {

enum class Suite { Axioms, Gl, Theta, Smash, Degenerate, Braiding };

std::optional<Suite> parse_suite(const std::string& name);
std::string suite_name(Suite s);
const std::vector<Suite>& all_suites();

// Per-suite defaults for the exhaustive/random case generation.
SuiteConfig default_config(Suite s);

// Identity lists. The algebroid must outlive the returned specs.
std::vector<CheckSpec> axiom_checks(const PostHopfAlgebroid& h);
std::vector<CheckSpec> gl_checks(const PostHopfAlgebroid& h);
std::vector<CheckSpec> theta_checks(const PostHopfAlgebroid& h);
std::vector<CheckSpec> smash_checks(const PostHopfAlgebroid& h);
// Requires h.mode() == DerivationMode::Zero.
std::vector<CheckSpec> degenerate_checks(const PostHopfAlgebroid& h);
std::vector<CheckSpec> braiding_checks(const Braiding& b);

// Builds the algebroid in the right mode and runs every check of the suite.
std::vector<CheckReport> run_suite(Suite s, const SuiteConfig& config);

}  // namespace postlr
