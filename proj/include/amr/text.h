#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace amr {

using Tokens = std::vector<std::string>;

// Whitespace tokenization; runs of spaces, tabs and newlines separate tokens.
Tokens SplitTokens(std::string_view text);

std::string JoinTokens(const Tokens &tokens, std::string_view sep = " ");

// Collapses whitespace runs to one space and trims both ends.
std::string NormalizeWhitespace(std::string_view text);

bool IsNumber(std::string_view text);

// Strips one pair of surrounding double quotes, if present.
std::string Unquote(std::string_view text);

// Reads a whole file; throws Error(kIo) on failure.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view contents);

// Lines without trailing newline; a final empty line is not reported.
std::vector<std::string> ReadLines(const std::string &path);

}  // namespace amr
