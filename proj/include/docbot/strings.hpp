// Copyright 2026 The docbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace docbot {

// ASCII-only case folding; bytes >= 0x80 pass through untouched.
std::string ascii_lower(std::string_view s);

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Parses "1,2,5" style integer lists. Throws UsageError on bad input.
std::vector<int> parse_int_list(std::string_view s);

// Whole-file helpers. Throw DataError when the file cannot be opened.
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

// Reads non-empty, non-comment ('#') lines, trimmed.
std::vector<std::string> read_lines(const std::string &path);

}  // namespace docbot
