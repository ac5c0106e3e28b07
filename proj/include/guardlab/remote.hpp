// Copyright 2026 The guardlab Authors
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

#ifndef GUARDLAB_REMOTE_HPP_
#define GUARDLAB_REMOTE_HPP_

#include <string>

#include "guardlab/format.hpp"
#include "guardlab/types.hpp"

namespace guardlab {

// Chat-completions-style endpoint for a real guard model. The request body
// is {"model": ..., "messages": [{"role": "user", "content": [parts]}]}
// where parts are {"type": "text", "text": ...} and, when the sample has an
// image, {"type": "image", "image_b64": <base64 PGM>}. The reply's first
// choice message content is parsed with parse_output.
struct RemoteEndpoint {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  std::string path = "/v1/chat/completions";
  std::string model = "guard-remote";
  double timeout_seconds = 60.0;
  std::string api_key;  // sent as a bearer token when non-empty
};

// Reads GUARD_API_KEY from the environment (empty when unset).
std::string api_key_from_env();

// Renders the prompt, performs one chat request and parses the reply.
// Throws Error(kTransport) on HTTP or network failures (carrying the status)
// and Error(kTimeout) on timeouts; a well-formed transport reply whose
// content lacks the tag grammar is NOT an error (format_ok = false).
ReasoningOutput remote_moderate(const RemoteEndpoint& endpoint,
                                const Sample& sample,
                                const PromptTemplate& tmpl);

}  // namespace guardlab

#endif  // GUARDLAB_REMOTE_HPP_
