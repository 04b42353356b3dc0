// Copyright 2026 The surveylens Authors
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

#include "surveylens/tagset.hpp"

#include <algorithm>

#include "surveylens/corpus.hpp"
#include "surveylens/error.hpp"
#include "surveylens/schema.hpp"

namespace surveylens {

TagSet::TagSet(std::vector<Tag> tags, bool allow_empty)
    : tags_(std::move(tags)), allow_empty_(allow_empty) {
  if (tags_.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "a tag set needs at least two tags");
  }
  std::set<std::string> seen;
  for (const auto& tag : tags_) {
    if (tag.name.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "tag name must not be empty");
    }
    if (tag.description.empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "tag '" + tag.name + "' has an empty description");
    }
    if (!seen.insert(tag.name).second) {
      throw Error(ErrorKind::kDuplicateId, "duplicate tag name '" + tag.name + "'");
    }
  }
}

TagSet TagSet::course_feedback() {
  return TagSet(
      {
          {"Course logistics and fit",
           "course delivery (policy, support), cost, difficulty, time commitment, "
           "grading, credit, schedule, user fit, access, background (e.g., prereqs "
           "and appropriateness of course level)"},
          {"Curriculum",
           "course content, curriculum, specific topics, course structure. This "
           "focuses on the content and the pedagogical structure of the content, "
           "including flow and organization. This also includes applied material "
           "such as clinical cases and case studies. Includes references to "
           "pre-recorded discussions between experts or between a doctor and a "
           "patient. Includes specific suggestions for additional courses or "
           "content"},
          {"Teaching modality",
           "video, visual, interactive, animation, step-by-step, deep dive, "
           "background builder (the format rather than the content/topic)"},
          {"Teaching", "instructors, quality of teaching and explanations"},
          {"Assessment", "quizzes, exams"},
          {"Resources",
           "note taking tools, study guides, notepads, readings. Includes other "
           "potential static resources like downloadable video transcripts"},
          {"Peer and teacher interaction",
           "includes chances for the student to interact with another person in "
           "the course (teacher or student). This includes discussion forums, "
           "teacher-student or student-student interactions. Includes requests "
           "for live sessions with teachers or live office hours"},
          {"Other",
           "catch-all for the rarer aspects that we'll encounter and also the "
           "'na', 'thank you', etc. comments that don't really belong in the "
           "above bins. Also for sufficiently general comments like 'all the "
           "course was terrific' that can't be narrowed down to one of the other "
           "categories"},
      },
      /*allow_empty=*/false);
}

TagSet TagSet::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("tag set: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tags") || !doc["tags"].is_array()) {
    throw Error(ErrorKind::kParse, "tag set: expected an object with a 'tags' array");
  }
  std::vector<Tag> tags;
  bool has_other = false;
  for (const auto& t : doc["tags"]) {
    if (!t.is_object() || !t.contains("name") || !t["name"].is_string()) {
      throw Error(ErrorKind::kParse, "tag set: every tag needs a string 'name'");
    }
    Tag tag{t["name"].get<std::string>(), t.value("description", std::string())};
    has_other = has_other || tag.name == "Other";
    tags.push_back(std::move(tag));
  }
  bool allow_empty = !has_other;
  if (auto it = doc.find("allow_empty"); it != doc.end()) {
    if (!it->is_boolean()) {
      throw Error(ErrorKind::kParse, "tag set: 'allow_empty' must be a boolean");
    }
    allow_empty = it->get<bool>();
  }
  return TagSet(std::move(tags), allow_empty);
}

TagSet TagSet::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::vector<std::string> TagSet::names() const {
  std::vector<std::string> out;
  out.reserve(tags_.size());
  for (const auto& t : tags_) out.push_back(t.name);
  return out;
}

std::set<std::string> TagSet::name_set() const {
  std::set<std::string> out;
  for (const auto& t : tags_) out.insert(t.name);
  return out;
}

bool TagSet::contains(std::string_view name) const { return find(name) != nullptr; }

const Tag* TagSet::find(std::string_view name) const {
  auto it = std::find_if(tags_.begin(), tags_.end(),
                         [&](const Tag& t) { return t.name == name; });
  return it == tags_.end() ? nullptr : &*it;
}

std::string TagSet::to_json() const {
  nlohmann::ordered_json doc;
  doc["tags"] = nlohmann::ordered_json::array();
  for (const auto& t : tags_) {
    doc["tags"].push_back({{"name", t.name}, {"description", t.description}});
  }
  doc["allow_empty"] = allow_empty_;
  return doc.dump(2) + "\n";
}

}  // namespace surveylens
