// Copyright 2026 The SQMG Authors
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

#include "sqmg/common/io.hpp"

#include <fstream>
#include <sstream>

#include "sqmg/common/error.hpp"

namespace sqmg {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path);
}

}  // namespace sqmg
