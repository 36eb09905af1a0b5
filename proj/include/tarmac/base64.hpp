#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tarmac::base64 {

std::string encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> decode(std::string_view text);

// Little-endian IEEE-754 binary64 packing used by the model files.
std::string encode_doubles(std::span<const double> values);
std::vector<double> decode_doubles(std::string_view text);

}  // namespace tarmac::base64
