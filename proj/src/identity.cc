// Copyright 2026 The ccreid Authors.
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

#include "ccreid/identity.h"

#include "ccreid/error.h"

namespace ccreid {

IdentityLabel IdentityLabel::Named(std::string name) {
  if (name.empty()) throw ValidationError("identity name must not be empty");
  if (name == kUnknownText) {
    throw ValidationError("identity name \"Unknown\" is reserved");
  }
  return IdentityLabel(std::move(name));
}

IdentityLabel IdentityLabel::Parse(std::string_view text) {
  if (text == kUnknownText) return Unknown();
  return Named(std::string(text));
}

}  // namespace ccreid
