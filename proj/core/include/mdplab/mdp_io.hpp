#pragma once

#include <string>

#include "mdplab/mdp.hpp"

namespace mdplab {

/// Text document for an MDP: game header, layout, reward constants, discount,
/// state list, and sparse probability rows. Probabilities are printed in
/// shortest round-trip form, so identical tables export to identical bytes.
std::string export_mdp_text(const Mdp& mdp);

/// Same document with the probability rows replaced by another table over
/// the same state index (used for noise-injected tables).
std::string export_mdp_text(const Mdp& mdp, const TransitionTable& table);

/// Inverse of export_mdp_text. Throws IoError on malformed input.
Mdp import_mdp_text(const std::string& text);

std::string format_double(double v);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mdplab
