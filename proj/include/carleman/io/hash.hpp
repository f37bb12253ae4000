#pragma once

#include <string>
#include <string_view>

namespace carleman::io {

/// Hex SHA-1 of "blob <size>\0" + content, as git computes object ids.
std::string git_blob_hash(std::string_view content);

}  // namespace carleman::io
