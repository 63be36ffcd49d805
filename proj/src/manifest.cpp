// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/manifest.hpp>

#include <estima/util.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <array>

namespace estima {

std::string sha256_hex(std::string_view bytes) {
    std::array<std::uint8_t, 32> digest{};
    unsigned len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr);
    return to_hex(digest.data(), digest.size());
}

std::string file_digest(const std::string& path) {
    return sha256_hex(read_file(path));
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    nlohmann::ordered_json inputs;
    for (const auto& [path, digest] : input_digests) inputs[path] = digest;
    j["inputs"] = std::move(inputs);
    j["height"] = height;
    j["methodology"] = methodology;
    j["ranges_digest"] = ranges_digest;
    j["version"] = version;
    return j.dump(2) + "\n";
}

} // namespace estima
