// Copyright 2026 The nscorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NSCORR_SRC_PRESETS_HPP
#define NSCORR_SRC_PRESETS_HPP

#include <string_view>
#include <utility>
#include <vector>

namespace nscorr::detail {

// Generated at build time from presets/*.toml; sorted by name.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_presets();

}  // namespace nscorr::detail

#endif  // NSCORR_SRC_PRESETS_HPP
