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

#include "guardlab/remote.hpp"

#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "guardlab/error.hpp"

namespace guardlab {
namespace {

using json = nlohmann::ordered_json;

std::string image_payload(const Sample& sample) {
  const ImageRef& ref = *sample.image;
  if (ref.b64.has_value()) return *ref.b64;
  if (!ref.loaded()) {
    fail(ErrorKind::kStateError,
         "remote request needs a decoded or inline image (id=" + sample.id + ")");
  }
  return base64_encode(encode_pgm(ref.image));
}

}  // namespace

std::string api_key_from_env() {
  const char* key = std::getenv("GUARD_API_KEY");
  return key == nullptr ? std::string() : std::string(key);
}

ReasoningOutput remote_moderate(const RemoteEndpoint& endpoint,
                                const Sample& sample,
                                const PromptTemplate& tmpl) {
  json part_text = {{"type", "text"}, {"text", render_prompt(tmpl, sample)}};
  json content = json::array({part_text});
  if (sample.image.has_value()) {
    content.push_back({{"type", "image"}, {"image_b64", image_payload(sample)}});
  }
  json body = {
      {"model", endpoint.model},
      {"messages", json::array({json{{"role", "user"}, {"content", content}}})},
  };

  httplib::Client client(endpoint.base_url);
  int seconds = static_cast<int>(endpoint.timeout_seconds);
  int micros = static_cast<int>(
      std::lround((endpoint.timeout_seconds - seconds) * 1e6));
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  httplib::Headers headers;
  if (!endpoint.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.api_key);
  }

  httplib::Result res =
      client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!res) {
    httplib::Error err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        err == httplib::Error::Read || err == httplib::Error::Write) {
      fail(ErrorKind::kTimeout,
           "request to " + endpoint.base_url + " timed out (" +
               httplib::to_string(err) + ")");
    }
    fail(ErrorKind::kTransport,
         "request to " + endpoint.base_url + " failed (" +
             httplib::to_string(err) + ")");
  }
  if (res->status < 200 || res->status >= 300) {
    fail(ErrorKind::kTransport,
         "HTTP " + std::to_string(res->status) + " from " + endpoint.base_url);
  }

  std::string reply;
  try {
    json parsed = json::parse(res->body);
    reply = parsed.at("choices").at(0).at("message").at("content")
                .get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kTransport,
         std::string("malformed chat-completions reply: ") + e.what());
  }
  return parse_output(reply, sample.has_response());
}

}  // namespace guardlab
