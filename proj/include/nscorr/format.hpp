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

#ifndef NSCORR_FORMAT_HPP
#define NSCORR_FORMAT_HPP

#include <charconv>
#include <string>

namespace nscorr {

// Shortest representation that round-trips; independent of locale and
// stream state, so written files are byte-stable.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace nscorr

#endif  // NSCORR_FORMAT_HPP
