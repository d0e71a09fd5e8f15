/*
 * Copyright 2026 The X-SHAP Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XSHAP_TEXT_HPP_
#define XSHAP_TEXT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xshap {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

// Whole-string decimal parse after trimming blanks; nullopt on any junk.
std::optional<double> ParseDouble(std::string_view text);

std::string_view Trim(std::string_view text);

std::vector<std::string> Split(std::string_view text, char sep);

}  // namespace xshap

#endif  // XSHAP_TEXT_HPP_
