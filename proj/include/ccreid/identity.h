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

#ifndef CCREID_IDENTITY_H_
#define CCREID_IDENTITY_H_

#include <compare>
#include <string>
#include <string_view>

namespace ccreid {

// A person identity: either a named member of the people-of-interest set or
// the `Unknown` sentinel used for out-of-gallery people. The sentinel's text
// form is "Unknown"; no named identity may use that text, so ordering by text
// is a total order that never confuses the two.
class IdentityLabel {
 public:
  static constexpr std::string_view kUnknownText = "Unknown";

  static IdentityLabel Unknown() { return IdentityLabel(std::string(kUnknownText)); }

  // Throws ValidationError on an empty name or the reserved sentinel text.
  static IdentityLabel Named(std::string name);

  // Maps "Unknown" to the sentinel and anything else to a named identity.
  static IdentityLabel Parse(std::string_view text);

  bool is_unknown() const { return name_ == kUnknownText; }
  const std::string& str() const { return name_; }

  friend bool operator==(const IdentityLabel&, const IdentityLabel&) = default;
  friend std::strong_ordering operator<=>(const IdentityLabel& a,
                                          const IdentityLabel& b) {
    return a.name_.compare(b.name_) <=> 0;
  }

 private:
  explicit IdentityLabel(std::string name) : name_(std::move(name)) {}

  std::string name_;
};

}  // namespace ccreid

#endif  // CCREID_IDENTITY_H_
