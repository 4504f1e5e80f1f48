#pragma once

// Reader and canonical printer for the `:strips :typing` fragment of PDDL.
// Symbols are case-insensitive and normalised to lower case.

#include <memory>
#include <string>

#include "oak/strips.hpp"

namespace oak {

/// Throws ParseError, SortError or UnsupportedFeature.
std::shared_ptr<const Domain> parse_domain(const std::string& text);

Problem parse_problem(std::shared_ptr<const Domain> domain, const std::string& text);
Problem parse_problem(const std::string& domain_text, const std::string& problem_text);

/// Canonical text: parsing it back yields an equal domain/problem, and
/// printing that again gives the same bytes.
std::string format_domain(const Domain& domain);
std::string format_problem(const Problem& problem);

std::string read_file(const std::string& path);

}  // namespace oak
