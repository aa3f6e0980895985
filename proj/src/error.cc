// Copyright 2026 The MIF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mif/error.h"

namespace mif {

const char* CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kIo:
      return "io";
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kValidation:
      return "validation";
    case ErrorCategory::kComputation:
      return "computation";
    case ErrorCategory::kNumeric:
      return "numeric";
  }
  return "unknown";
}

}  // namespace mif
