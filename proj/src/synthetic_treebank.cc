/* Copyright 2026 The Stackprop Authors. All Rights Reserved.

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

#include "stackprop/synthetic_treebank.h"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

namespace stackprop {

namespace {

// Words listed in both kNouns and kVerbs are the ambiguous ones.
const std::vector<std::string> kNouns = {
    "dog",    "cat",    "man",    "woman",  "child",   "teacher", "student",
    "city",   "house",  "car",    "table",  "window",  "garden",  "river",
    "market", "school", "letter", "friend", "doctor",  "king",    "question",
    "answer", "paper",  "idea",   "story",  "game",    "road",    "bird",
    "book",   "train",  "plant",  "park",   "light",   "watch",   "fish",
    "duck",   "play",   "walk",   "drink",  "dance",   "plan",    "call",
    "work",   "show",   "visit",  "saw",    "box",     "church"};
const std::vector<std::string> kVerbs = {
    "see",   "like",  "find",  "take",  "make",  "read",  "write", "buy",
    "sell",  "build", "open",  "carry", "follow", "love", "know",  "want",
    "bring", "keep",  "book",  "train", "plant", "park",  "light", "watch",
    "fish",  "play",  "drink", "plan",  "call",  "show",  "visit", "cook"};
const std::vector<std::string> kIntransitive = {
    "sleep", "arrive", "laugh", "smile", "wait", "fall",
    "sit",   "stay",   "run",   "walk",  "dance", "work"};
const std::vector<std::pair<std::string, std::string>> kIrregularPast = {
    {"see", "saw"},     {"take", "took"},    {"make", "made"},
    {"find", "found"},  {"write", "wrote"},  {"buy", "bought"},
    {"sell", "sold"},   {"build", "built"},  {"bring", "brought"},
    {"keep", "kept"},   {"know", "knew"},    {"read", "read"},
    {"sit", "sat"},     {"fall", "fell"},    {"run", "ran"},
    {"light", "lit"}};
const std::vector<std::string> kAdjectives = {
    "big",    "small",   "old",     "new",        "red",       "happy",
    "sad",    "long",    "short",   "green",      "quiet",     "bright",
    "strange", "famous", "careful", "well-known", "long-term", "low-cost",
    "so-called", "old-fashioned"};
const std::vector<std::string> kAdverbs = {
    "quickly", "slowly", "often", "never", "always", "today", "yesterday",
    "soon",    "carefully", "quietly"};
const std::vector<std::string> kDeterminers = {"the", "a", "this", "that",
                                               "every", "some", "no"};
const std::vector<std::string> kSubjectPronouns = {"he", "she", "they", "it",
                                                   "we", "I", "you"};
const std::vector<std::string> kObjectPronouns = {"him", "her", "them", "it",
                                                  "us", "me", "you"};
const std::vector<std::string> kProperNouns = {
    "Paris", "John", "Mary", "London", "Berlin", "Anna", "Peter", "Tokyo",
    "York",  "Smith", "Maria", "Rome"};
const std::vector<std::string> kAdpositions = {"in", "on", "at", "with",
                                               "from", "to", "near", "under",
                                               "about", "for", "of"};
const std::vector<std::string> kConjunctions = {"and", "or", "but"};
const std::vector<std::string> kModals = {"will", "can", "must", "should",
                                          "may"};
const std::vector<std::string> kNumberWords = {"two", "three", "four", "five",
                                               "ten"};

const std::vector<std::string> kSyllables = {
    "ba", "ko", "ri", "te", "mu", "sa", "lo", "ne", "vi", "da",
    "pe", "gu", "fa", "zo", "ki", "ra", "ti", "mo", "lu", "ser"};

struct Node {
  std::string form;
  std::string upos;
  std::string deprel;
  int head = -1;  // node id, -1 for the root
  std::vector<int> left;
  std::vector<int> right;
  bool extraposed = false;
};

class Generator {
 public:
  Generator(const SyntheticTreebankOptions &options, std::mt19937_64 *rng)
      : options_(options), rng_(*rng) {}

  Sentence Generate(int number) {
    nodes_.clear();
    extraposed_.clear();
    const int root = Clause("root", -1, 0);
    // Final punctuation.
    const char *final_punct = Chance(0.8) ? "." : (Chance(0.5) ? "!" : "?");
    Attach(root, NewNode(final_punct, "PUNCT", "punct"), false);

    std::vector<int> order;
    Linearize(root, &order);
    // Extraposed subtrees go right before the final punctuation.
    for (int id : extraposed_) {
      std::vector<int> sub;
      nodes_[id].extraposed = false;
      Linearize(id, &sub);
      order.insert(order.end() - 1, sub.begin(), sub.end());
    }
    std::vector<int> position(nodes_.size(), 0);
    for (size_t i = 0; i < order.size(); ++i) position[order[i]] = i + 1;

    Sentence sentence;
    sentence.id = "synthetic-" + std::to_string(number);
    for (size_t i = 0; i < order.size(); ++i) {
      const Node &node = nodes_[order[i]];
      Token token;
      token.index = static_cast<int>(i + 1);
      token.form = node.form;
      token.lemma = "_";
      token.upos = node.upos;
      token.head = node.head < 0 ? kRootIndex : position[node.head];
      token.deprel = node.deprel;
      sentence.tokens.push_back(std::move(token));
    }
    std::string &first = sentence.tokens.front().form;
    if (!first.empty() && first[0] >= 'a' && first[0] <= 'z') {
      first[0] = static_cast<char>(first[0] - 'a' + 'A');
    }
    return sentence;
  }

 private:
  bool Chance(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  }

  int Uniform(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  const std::string &Pick(const std::vector<std::string> &words) {
    return words[Uniform(static_cast<int>(words.size()))];
  }

  std::string Invented(const char *suffix) {
    std::string stem;
    const int syllables = 2 + Uniform(2);
    for (int i = 0; i < syllables; ++i) stem += Pick(kSyllables);
    return stem + suffix;
  }

  int NewNode(std::string form, std::string upos, std::string deprel) {
    Node node;
    node.form = std::move(form);
    node.upos = std::move(upos);
    node.deprel = std::move(deprel);
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  void Attach(int head, int dependent, bool on_left) {
    nodes_[dependent].head = head;
    if (on_left) {
      nodes_[head].left.push_back(dependent);
    } else {
      nodes_[head].right.push_back(dependent);
    }
  }

  void Linearize(int id, std::vector<int> *order) {
    const Node &node = nodes_[id];
    for (int child : node.left) {
      if (!nodes_[child].extraposed) Linearize(child, order);
    }
    order->push_back(id);
    for (int child : node.right) {
      if (!nodes_[child].extraposed) Linearize(child, order);
    }
  }

  static std::string Inflect(const std::string &verb, const char *ending) {
    const std::string e = ending;
    if (e == "ed") {
      for (const auto &[base, past] : kIrregularPast) {
        if (base == verb) return past;
      }
    }
    std::string stem = verb;
    if (!stem.empty() && stem.back() == 'e' && (e == "ing" || e == "ed")) {
      stem.pop_back();
    }
    if (e == "s" && (stem.back() == 'h' || stem.back() == 'x')) return stem + "es";
    return stem + e;
  }

  static std::string Plural(const std::string &noun) {
    if (noun == "man") return "men";
    if (noun == "woman") return "women";
    if (noun == "child") return "children";
    if (noun.back() == 'y' && noun != "play" && noun != "key") {
      return noun.substr(0, noun.size() - 1) + "ies";
    }
    if (noun.back() == 'h' || noun.back() == 'x' || noun.back() == 's') {
      return noun + "es";
    }
    return noun + "s";
  }

  // Returns the head node of a noun phrase attached with `deprel`.
  int NounPhrase(const std::string &deprel, int depth, bool subject) {
    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (r < 0.18) {
      return NewNode(subject ? Pick(kSubjectPronouns) : Pick(kObjectPronouns),
                     "PRON", deprel);
    }
    if (r < 0.32) {
      const std::string name = Chance(options_.invented_word_rate)
                                   ? Capitalized(Invented("o"))
                                   : Pick(kProperNouns);
      const int head = NewNode(name, "PROPN", deprel);
      if (Chance(0.25)) {
        Attach(head, NewNode(Pick(kProperNouns), "PROPN", "compound"), true);
      }
      return head;
    }
    bool plural = Chance(0.3);
    std::string noun = Chance(options_.invented_word_rate)
                           ? Invented(Chance(0.5) ? "tion" : "ment")
                           : Pick(kNouns);
    std::vector<int> left;
    if (Chance(0.12)) {
      plural = true;
      left.push_back(NewNode(Chance(0.5) ? std::to_string(2 + Uniform(1999))
                                         : Pick(kNumberWords),
                             "NUM", "nummod"));
    } else if (Chance(0.8)) {
      std::string det = Pick(kDeterminers);
      if (plural && (det == "a" || det == "this" || det == "that" ||
                     det == "every")) {
        det = "the";
      }
      left.insert(left.begin(), NewNode(det, "DET", "det"));
    }
    const int adjectives = Chance(0.35) ? (Chance(0.2) ? 2 : 1) : 0;
    for (int i = 0; i < adjectives; ++i) {
      const std::string adj = Chance(options_.invented_word_rate)
                                  ? Invented(Chance(0.5) ? "ous" : "ful")
                                  : Pick(kAdjectives);
      left.push_back(NewNode(adj, "ADJ", "amod"));
    }
    const int head = NewNode(plural ? Plural(noun) : noun, "NOUN", deprel);
    for (int dep : left) Attach(head, dep, true);
    if (depth < 2 && Chance(subject ? 0.15 : 0.2)) {
      const int pp = PrepositionalPhrase("nmod", depth + 1);
      Attach(head, pp, false);
    }
    return head;
  }

  int PrepositionalPhrase(const std::string &deprel, int depth) {
    const int head = NounPhrase(deprel, depth, false);
    const int adp = NewNode(Pick(kAdpositions), "ADP", "case");
    nodes_[head].left.insert(nodes_[head].left.begin(), adp);
    nodes_[adp].head = head;
    return head;
  }

  static std::string Capitalized(std::string word) {
    if (!word.empty()) word[0] = static_cast<char>(word[0] - 'a' + 'A');
    return word;
  }

  // Builds a clause and returns its verb node.
  int Clause(const std::string &deprel, int governor, int depth) {
    const bool transitive = Chance(0.7);
    std::string lemma;
    if (Chance(options_.invented_word_rate)) {
      lemma = Invented(Chance(0.5) ? "ize" : "ate");
    } else {
      lemma = transitive ? Pick(kVerbs) : Pick(kIntransitive);
    }
    const int subject = NounPhrase("nsubj", depth, true);
    const bool pronoun = nodes_[subject].upos == "PRON";
    const double tense = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    int aux = -1;
    std::string form;
    if (tense < 0.25) {
      aux = NewNode(Pick(kModals), "AUX", "aux");
      form = lemma;
    } else if (tense < 0.4) {
      aux = NewNode(Chance(0.5) ? "is" : "was", "AUX", "aux");
      form = Inflect(lemma, "ing");
    } else if (tense < 0.7) {
      form = Inflect(lemma, "ed");
    } else {
      form = pronoun ? lemma : Inflect(lemma, "s");
    }
    const int verb = NewNode(form, "VERB", deprel);
    if (governor >= 0) nodes_[verb].head = governor;

    if (depth == 0 && Chance(0.1)) {
      Attach(verb, NewNode(Pick(kAdverbs), "ADV", "advmod"), true);
    }
    Attach(verb, subject, true);
    if (aux >= 0) Attach(verb, aux, true);

    int object = -1;
    if (transitive) {
      object = NounPhrase("obj", depth, false);
      Attach(verb, object, false);
    }
    if (Chance(0.15)) {
      Attach(verb, NewNode(Pick(kAdverbs), "ADV", "advmod"), false);
    }
    const int pps = Chance(0.45) ? (Chance(0.25) ? 2 : 1) : 0;
    for (int i = 0; i < pps; ++i) {
      // Attachment ambiguity: the PP may modify the object or the verb.
      if (object >= 0 && nodes_[object].upos == "NOUN" && Chance(0.4)) {
        Attach(object, PrepositionalPhrase("nmod", depth + 1), false);
      } else {
        Attach(verb, PrepositionalPhrase("obl", depth + 1), false);
      }
    }
    if (depth == 0 && nodes_[subject].upos == "NOUN" &&
        Chance(options_.nonprojective_rate)) {
      const int pp = PrepositionalPhrase("nmod", 2);
      Attach(subject, pp, false);
      nodes_[pp].extraposed = true;
      extraposed_.push_back(pp);
    }
    if (depth == 0 && Chance(0.15)) {
      const int conj = Clause("conj", verb, depth + 1);
      nodes_[verb].right.push_back(conj);
      if (Chance(0.5)) {
        Attach(conj, NewNode(",", "PUNCT", "punct"), true);
        // Keep the comma before the conjunction.
        std::rotate(nodes_[conj].left.begin(), nodes_[conj].left.end() - 1,
                    nodes_[conj].left.end());
      }
      const int cc = NewNode(Pick(kConjunctions), "CCONJ", "cc");
      nodes_[cc].head = conj;
      nodes_[conj].left.insert(nodes_[conj].left.begin() +
                                   (nodes_[nodes_[conj].left[0]].upos == "PUNCT"
                                        ? 1
                                        : 0),
                               cc);
    }
    return verb;
  }

  const SyntheticTreebankOptions &options_;
  std::mt19937_64 &rng_;
  std::vector<Node> nodes_;
  std::vector<int> extraposed_;
};

}  // namespace

std::vector<Sentence> GenerateSyntheticTreebank(
    const SyntheticTreebankOptions &options) {
  std::mt19937_64 rng(options.seed);
  Generator generator(options, &rng);
  std::vector<Sentence> corpus;
  corpus.reserve(options.num_sentences);
  for (int i = 0; i < options.num_sentences; ++i) {
    corpus.push_back(generator.Generate(i + 1));
  }
  return corpus;
}

}  // namespace stackprop
