/* Copyright 2026 The CCZPulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <stdexcept>
#include <string>

namespace cczpulse {

/// Invalid or inconsistent run configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single-excitation diagonal entry vanished, so no compensation phase can
/// be read off. Callers usually fall back to zero phases.
class DegeneratePhaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cczpulse
