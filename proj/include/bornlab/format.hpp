// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

namespace bornlab {

/// Shortest decimal text that round-trips to the same double. Locale independent.
std::string format_double(double x);

/// Writes contents to path via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace bornlab
