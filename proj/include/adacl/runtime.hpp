// Copyright 2026 The ADACL Authors. All Rights Reserved.
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

#ifndef ADACL_RUNTIME_HPP_
#define ADACL_RUNTIME_HPP_

namespace adacl {

/// Keeps freed tensor buffers in the heap instead of returning them to the
/// OS after every step (glibc only; a no-op elsewhere). Call once at startup.
void tune_allocator();

}  // namespace adacl

#endif  // ADACL_RUNTIME_HPP_
