// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/methodology.hpp>

#include <estima/util.hpp>

namespace estima {

std::string MethodologySpec::canonical_name() const {
    std::string name = "DD";
    if (ow) name += "-OW";
    if (mi) name += "+MI";
    if (ca) name += "+CA";
    if (vf) name += "-VF";
    if (tf) name += "-TF";
    if (dc) name += "-DC";
    return name;
}

MethodologySpec parse_methodology(std::string_view text) {
    if (text.substr(0, 2) != "DD") {
        throw InputError("methodology must start with DD: \"" + std::string(text) + "\"");
    }
    MethodologySpec spec;
    std::size_t pos = 2;
    while (pos < text.size()) {
        if (pos + 3 > text.size()) {
            throw InputError("methodology: truncated token in \"" + std::string(text) + "\"");
        }
        char sign = text[pos];
        std::string_view token = text.substr(pos + 1, 2);
        pos += 3;
        bool* flag = nullptr;
        if (sign == '+' && token == "MI") flag = &spec.mi;
        if (sign == '+' && token == "CA") flag = &spec.ca;
        if (sign == '-' && token == "OW") flag = &spec.ow;
        if (sign == '-' && token == "VF") flag = &spec.vf;
        if (sign == '-' && token == "TF") flag = &spec.tf;
        if (sign == '-' && token == "DC") flag = &spec.dc;
        if (!flag) {
            throw InputError("methodology: unknown token \"" + std::string(1, sign) +
                             std::string(token) + "\"");
        }
        if (*flag) {
            throw InputError("methodology: duplicate token \"" + std::string(1, sign) +
                             std::string(token) + "\"");
        }
        *flag = true;
    }
    if (spec.ca && !spec.mi) throw InputError("methodology: CA requires MI");
    if (spec.ow && !spec.mi) throw InputError("methodology: OW requires MI");
    return spec;
}

const std::vector<MethodologySpec>& selected_methodologies() {
    static const std::vector<MethodologySpec> specs = [] {
        const char* names[] = {
            "DD",
            "DD-VF",
            "DD-TF",
            "DD-VF-TF",
            "DD-DC",
            "DD+MI",
            "DD+MI-VF-TF",
            "DD-OW+MI",
            "DD-OW+MI-VF-TF",
            "DD-OW+MI-DC",
            "DD-OW+MI-VF-TF-DC",
            "DD+MI+CA",
            "DD-OW+MI+CA",
            "DD+MI+CA-VF-TF",
            "DD-OW+MI+CA-VF-TF",
        };
        std::vector<MethodologySpec> out;
        for (const char* name : names) out.push_back(parse_methodology(name));
        return out;
    }();
    return specs;
}

} // namespace estima
