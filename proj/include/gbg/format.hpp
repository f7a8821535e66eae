#pragma once

// Rendering of presentations and cell listings as text, JSON and GAP input.

#include <string>

#include "gbg/oracle.hpp"
#include "gbg/presenter.hpp"

namespace gbg {

enum class OutputFormat { Text, Json, Gap };

OutputFormat parse_format(const std::string& s);

std::string render_presentation(const EmbeddedGraph& g, const Presentation& p,
                                OutputFormat fmt, bool simplified);

// Morse-classified cell listing for dimensions 0..min(n,2).
std::string render_cells(const EmbeddedGraph& g, int n, OutputFormat fmt,
                         size_t budget, bool critical_only);

std::string render_homology_check(const EmbeddedGraph& g, const Abelian& from_presentation,
                                  const Abelian& from_chains, OutputFormat fmt);

}  // namespace gbg
