#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sovc {

/// Lowercases, replaces punctuation other than apostrophes with spaces and
/// splits on whitespace. "A man is driving a car." -> [a man is driving a car]
std::vector<std::string> tokenize_caption(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace sovc
