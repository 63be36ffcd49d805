// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_MANIFEST_HPP
#define ESTIMA_MANIFEST_HPP

#include <map>
#include <string>
#include <vector>

namespace estima {

std::string sha256_hex(std::string_view bytes);
std::string file_digest(const std::string& path);

// Reproducibility record accompanying every report: the exact command, the
// input file digests, the height and methodology, and the tool version.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> input_digests; // path -> sha256
    std::uint32_t height = 0;
    std::string methodology; // canonical name, or "sweep"
    std::string ranges_digest;
    std::string version;

    std::string to_json() const;
};

} // namespace estima

#endif // ESTIMA_MANIFEST_HPP
