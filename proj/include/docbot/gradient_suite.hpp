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

#include <cstdint>
#include <vector>

#include "docbot/nn/gradcheck.hpp"

namespace docbot {

// Layer suite plus the full matcher loss (with and without self-match)
// and the seq2seq loss, all at tiny dimensions.
std::vector<nn::GradCheckResult> full_gradient_suite(uint64_t seed = 7);

}  // namespace docbot
