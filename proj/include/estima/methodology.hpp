// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_METHODOLOGY_HPP
#define ESTIMA_METHODOLOGY_HPP

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace estima {

// Parsed form of a methodology string such as "DD-OW+MI-DC": direct deposits
// plus optional expansions (+MI, +CA) and filters (-OW, -VF, -TF, -DC).
// Token order in the input is free; execution order is fixed
// (expansion -> OW restriction -> collection -> DC -> TF -> VF).
struct MethodologySpec {
    bool mi = false;
    bool ca = false; // requires mi
    bool ow = false; // requires mi
    bool vf = false;
    bool tf = false;
    bool dc = false;

    // Fixed part order: DD, -OW, +MI, +CA, -VF, -TF, -DC.
    std::string canonical_name() const;

    auto operator<=>(const MethodologySpec&) const = default;
};

// Grammar: "DD" followed by "+MI" | "+CA" | "-OW" | "-VF" | "-TF" | "-DC" in
// any order, each at most once. Throws InputError on unknown or duplicate
// tokens, a missing DD prefix, CA without MI, or OW without MI.
MethodologySpec parse_methodology(std::string_view text);

// The 15 selected methodologies, in presentation order: the five unexpanded
// ones, the six MI ones, and the four MI+CA ones.
const std::vector<MethodologySpec>& selected_methodologies();

} // namespace estima

#endif // ESTIMA_METHODOLOGY_HPP
