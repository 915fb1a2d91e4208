// Copyright 2026 The rpkg Authors.
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

#ifndef RPKG_POS_TAGGER_H_
#define RPKG_POS_TAGGER_H_

#include <string>
#include <string_view>
#include <vector>

namespace rpkg {

struct TaggedToken {
  std::string word;
  std::string tag;  // Penn Treebank tag

  bool operator==(const TaggedToken &) const = default;
};

struct TaggedSentence {
  std::vector<TaggedToken> tokens;

  std::vector<std::string> tags() const;
  bool operator==(const TaggedSentence &) const = default;
};

// Part-of-speech tagger interface. Phrase extraction only depends on the
// tag sequence, so a statistical tagger can be dropped in here.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual TaggedSentence tag(std::string_view sentence) const = 0;
};

// Splits on whitespace and peels leading/trailing punctuation off each
// chunk into separate tokens.
std::vector<std::string> tokenize(std::string_view sentence);

// Deterministic lexicon + suffix tagger tuned for short package
// descriptions. Rules, first hit wins:
//   punctuation      -> . , : -LRB- -RRB- `` '' SYM
//   contains '_'     -> SYM (code identifiers such as package names)
//   closed classes   -> DT IN CC TO PRP PRP$ MD, auxiliaries (is/are/...)
//   verb lexicon     -> VB for base forms, VBZ for -s/-es/-ies forms;
//                       demoted to NN/NNS right after DT, PRP$ or CD
//   capitalized, not sentence-initial -> NNP
//   leading digit    -> CD
//   suffixes         -> -ing VBG, -ed VBD, -ly RB, -s NNS
//   otherwise        -> NN
class RuleTagger : public Tagger {
 public:
  TaggedSentence tag(std::string_view sentence) const override;
};

// Tags with RuleTagger.
TaggedSentence pos_tag(std::string_view sentence);

}  // namespace rpkg

#endif  // RPKG_POS_TAGGER_H_
