// Copyright 2026 The docbot Authors
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

#include "docbot/text_prep.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <mutex>

#include "docbot/error.hpp"
#include "docbot/strings.hpp"

#ifndef DOCBOT_DEFAULT_RESOURCE_DIR
#define DOCBOT_DEFAULT_RESOURCE_DIR "data"
#endif

namespace docbot {
namespace {

constexpr std::array<std::string_view, kNumPosTags> kTagNames = {
    "noun", "propn", "pron", "verb", "modal", "adj", "adv",
    "det",  "prep",  "part", "to",   "num",   "punct", "other",
};

// Decodes one UTF-8 code point at `pos`. Malformed bytes decode as U+FFFD
// with length 1 so that tokenization always makes progress.
char32_t decode(std::string_view s, size_t pos, size_t *len) {
  auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](size_t i) -> int {
    if (pos + i >= s.size()) return -1;
    auto b = static_cast<unsigned char>(s[pos + i]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    *len = 1;
    return b0;
  }
  int need = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    *len = 1;
    return 0xFFFD;
  }
  for (int i = 1; i <= need; ++i) {
    int c = cont(static_cast<size_t>(i));
    if (c < 0) {
      *len = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  *len = static_cast<size_t>(need) + 1;
  return cp;
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200B) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
         c == 0x3000 || c == 0xFEFF;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7 ||
         (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x20A0 && c <= 0x20CF) || (c >= 0x3001 && c <= 0x3003) ||
         (c >= 0x3008 && c <= 0x3011) || (c >= 0xFF01 && c <= 0xFF0F) ||
         (c >= 0xFF1A && c <= 0xFF20);
}

bool is_word(char32_t c) { return !is_space(c) && !is_punct(c); }
bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }
bool is_letter(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_sentence_final(char32_t c) { return c == '.' || c == '!' || c == '?'; }

bool is_punctuation_surface(std::string_view s) {
  if (s.empty()) return false;
  size_t len = 0;
  return is_punct(decode(s, 0, &len));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool is_possessive_pronoun(std::string_view lower) {
  return lower == "its" || lower == "their" || lower == "his" ||
         lower == "her" || lower == "my" || lower == "our" || lower == "your";
}

bool is_nominal(PosTag t) {
  return t == PosTag::kNoun || t == PosTag::kProperNoun;
}

bool has(const std::vector<PosTag> &readings, PosTag t) {
  return std::find(readings.begin(), readings.end(), t) != readings.end();
}

const std::vector<PosTag> &empty_readings() {
  static const std::vector<PosTag> empty;
  return empty;
}

}  // namespace

std::string_view pos_tag_name(PosTag tag) {
  return kTagNames[static_cast<size_t>(tag)];
}

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tokenizer.

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t pos = 0;
  const size_t n = text.size();
  while (pos < n) {
    size_t len = 0;
    char32_t c = decode(text, pos, &len);
    if (is_space(c)) {
      pos += len;
      continue;
    }
    size_t start = pos;
    if (is_punct(c)) {
      pos += len;
      if (is_sentence_final(c)) {
        while (pos < n && is_sentence_final(static_cast<unsigned char>(text[pos]))) {
          ++pos;
        }
      }
      tokens.push_back({std::string(text.substr(start, pos - start)),
                        PosTag::kOther, {start, pos}});
      continue;
    }
    // Word: runs of word characters, joined across digit separators
    // ("3.5", "1,000"), single-letter abbreviations ("U.S"), and internal
    // hyphens or apostrophes ("state-of-the-art", "don't").
    char32_t prev = 0;
    size_t segment_letters = 0;
    while (pos < n) {
      size_t clen = 0;
      char32_t ch = decode(text, pos, &clen);
      if (is_word(ch)) {
        prev = ch;
        if (is_letter(ch)) ++segment_letters;
        else segment_letters = 2;
        pos += clen;
        continue;
      }
      if (pos + clen >= n) break;
      size_t nlen = 0;
      char32_t next = decode(text, pos + clen, &nlen);
      if (!is_word(next)) break;
      bool join = false;
      if ((ch == '.' || ch == ',') && is_digit(prev) && is_digit(next)) {
        join = true;
      } else if (ch == '.' && segment_letters == 1 && is_letter(next)) {
        join = true;
      } else if ((ch == '-' || ch == '\'' || ch == 0x2019) && is_word(prev)) {
        join = true;
      }
      if (!join) break;
      pos += clen;
      segment_letters = 0;
    }
    tokens.push_back({std::string(text.substr(start, pos - start)),
                      PosTag::kOther, {start, pos}});
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// POS tagging.

PosTagger PosTagger::from_lines(const std::vector<std::string> &lines) {
  PosTagger tagger;
  size_t line_no = 0;
  for (const std::string &line : lines) {
    ++line_no;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError("lexicon line " + std::to_string(line_no) +
                        ": expected surface<TAB>tag");
    }
    std::string surface = ascii_lower(trim(line.substr(0, tab)));
    std::string_view tag_name = trim(std::string_view(line).substr(tab + 1));
    auto tag = parse_pos_tag(tag_name);
    if (!tag || surface.empty()) {
      throw ConfigError("lexicon line " + std::to_string(line_no) +
                        ": unknown tag '" + std::string(tag_name) + "'");
    }
    auto &readings = tagger.lexicon_[surface];
    if (!has(readings, *tag)) readings.push_back(*tag);
  }
  return tagger;
}

PosTagger PosTagger::load(const std::string &path) {
  return from_lines(read_lines(path));
}

const std::vector<PosTag> &PosTagger::readings(std::string_view lower) const {
  auto it = lexicon_.find(lower);
  return it == lexicon_.end() ? empty_readings() : it->second;
}

std::vector<Token> PosTagger::tag(std::vector<Token> tokens) const {
  auto default_reading = [&](size_t i) -> std::optional<PosTag> {
    if (i >= tokens.size()) return std::nullopt;
    const auto &r = readings(ascii_lower(tokens[i].surface));
    if (r.empty()) return std::nullopt;
    return r.front();
  };

  for (size_t i = 0; i < tokens.size(); ++i) {
    Token &tok = tokens[i];
    const std::string lower = ascii_lower(tok.surface);
    const bool has_prev = i > 0 && tokens[i - 1].pos != PosTag::kPunctuation;
    const PosTag prev = has_prev ? tokens[i - 1].pos : PosTag::kPunctuation;
    const bool prev_possessive =
        has_prev && is_possessive_pronoun(ascii_lower(tokens[i - 1].surface));
    const bool prev_nominal_slot =
        prev == PosTag::kDeterminer || prev == PosTag::kAdjective ||
        prev == PosTag::kNumber || prev_possessive;
    const bool prev_subject =
        !prev_possessive && (prev == PosTag::kPronoun || is_nominal(prev));

    if (is_punctuation_surface(tok.surface)) {
      tok.pos = PosTag::kPunctuation;
      continue;
    }
    if (tok.surface[0] >= '0' && tok.surface[0] <= '9') {
      tok.pos = PosTag::kNumber;
      continue;
    }

    const auto &r = readings(lower);
    if (!r.empty()) {
      PosTag chosen = r.front();
      if (r.size() > 1) {
        if (has(r, PosTag::kInfinitiveMarker) && has(r, PosTag::kPreposition)) {
          auto next = default_reading(i + 1);
          chosen = next == PosTag::kVerb ? PosTag::kInfinitiveMarker
                                         : PosTag::kPreposition;
        } else if (has(r, PosTag::kAdjective) && has(r, PosTag::kAdverb) &&
                   (default_reading(i + 1) == PosTag::kNoun ||
                    default_reading(i + 1) == std::nullopt)) {
          // "fast charging": adjective before a nominal.
          chosen = i + 1 < tokens.size() &&
                           !is_punctuation_surface(tokens[i + 1].surface)
                       ? PosTag::kAdjective
                       : chosen;
        } else if (prev_nominal_slot && has(r, PosTag::kNoun)) {
          chosen = PosTag::kNoun;
        } else if (prev_nominal_slot && has(r, PosTag::kAdjective)) {
          chosen = PosTag::kAdjective;
        } else if ((prev == PosTag::kModal ||
                    prev == PosTag::kInfinitiveMarker || prev_subject) &&
                   has(r, PosTag::kVerb)) {
          chosen = PosTag::kVerb;
        }
      }
      tok.pos = chosen;
      continue;
    }

    // Unknown word.
    const bool capitalized =
        is_upper(tok.surface[0]) ||
        std::any_of(tok.surface.begin() + 1, tok.surface.end(), is_upper);
    if (capitalized) {
      tok.pos = PosTag::kProperNoun;
    } else if (static_cast<unsigned char>(tok.surface[0]) >= 0x80) {
      tok.pos = PosTag::kNoun;
    } else if (ends_with(lower, "ly")) {
      tok.pos = PosTag::kAdverb;
    } else if (ends_with(lower, "ous") || ends_with(lower, "ful") ||
               ends_with(lower, "able") || ends_with(lower, "ible") ||
               ends_with(lower, "ive") || ends_with(lower, "less") ||
               ends_with(lower, "ic")) {
      tok.pos = PosTag::kAdjective;
    } else if (ends_with(lower, "ing")) {
      tok.pos = (prev_subject || prev == PosTag::kVerb ||
                 prev == PosTag::kModal)
                    ? PosTag::kVerb
                    : PosTag::kNoun;
    } else if (ends_with(lower, "ed")) {
      tok.pos = prev_nominal_slot ? PosTag::kAdjective : PosTag::kVerb;
    } else if (ends_with(lower, "s") && !ends_with(lower, "ss") &&
               !ends_with(lower, "us") && !ends_with(lower, "is")) {
      tok.pos = prev_subject ? PosTag::kVerb : PosTag::kNoun;
    } else {
      tok.pos = PosTag::kNoun;
    }
  }
  return tokens;
}

std::vector<Token> tag_pos(std::vector<Token> tokens, const PosTagger &tagger) {
  return tagger.tag(std::move(tokens));
}

// ---------------------------------------------------------------------------
// Abbreviations and resources.

AbbreviationList AbbreviationList::from_lines(
    const std::vector<std::string> &lines) {
  AbbreviationList list;
  for (const std::string &line : lines) {
    std::string entry = ascii_lower(line);
    if (!entry.empty() && entry.back() == '.') entry.pop_back();
    if (!entry.empty()) list.entries_.insert(entry);
  }
  return list;
}

AbbreviationList AbbreviationList::load(const std::string &path) {
  return from_lines(read_lines(path));
}

bool AbbreviationList::contains(std::string_view word) const {
  return entries_.count(ascii_lower(word)) > 0;
}

TextResources TextResources::load(const std::string &data_dir) {
  TextResources res;
  res.tagger = PosTagger::load(data_dir + "/pos_lexicon.tsv");
  res.abbreviations = AbbreviationList::load(data_dir + "/abbreviations.txt");
  return res;
}

std::string default_resource_dir() {
  if (const char *env = std::getenv("DOCBOT_RESOURCE_DIR"); env && *env) {
    return env;
  }
  return DOCBOT_DEFAULT_RESOURCE_DIR;
}

const TextResources &default_resources() {
  static const TextResources resources = TextResources::load(default_resource_dir());
  return resources;
}

// ---------------------------------------------------------------------------
// Sentence splitting.

std::vector<Sentence> split_sentences(const RawDocument &doc,
                                      const std::vector<Token> &tokens,
                                      const AbbreviationList &abbreviations) {
  std::vector<Sentence> sentences;
  size_t begin = 0;

  auto closes_abbreviation = [&](size_t i) {
    if (tokens[i].surface != "." || i == 0) return false;
    const Token &prev = tokens[i - 1];
    return prev.span.end == tokens[i].span.start &&
           !is_punctuation_surface(prev.surface) &&
           abbreviations.contains(prev.surface);
  };
  auto is_closer = [](std::string_view s) {
    return s == "\"" || s == "'" || s == ")" || s == "]" || s == "”" ||
           s == "’";
  };
  auto emit = [&](size_t end) {
    if (end <= begin) return;
    Sentence sentence;
    sentence.doc_id = doc.doc_id;
    sentence.index = sentences.size();
    const size_t base = tokens[begin].span.start;
    sentence.text = doc.text.substr(base, tokens[end - 1].span.end - base);
    for (size_t i = begin; i < end; ++i) {
      Token t = tokens[i];
      t.span = {t.span.start - base, t.span.end - base};
      sentence.tokens.push_back(std::move(t));
    }
    sentences.push_back(std::move(sentence));
    begin = end;
  };

  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string &s = tokens[i].surface;
    if (s.empty() || !is_sentence_final(static_cast<unsigned char>(s[0]))) {
      continue;
    }
    if (closes_abbreviation(i)) continue;
    size_t end = i + 1;
    while (end < tokens.size() && is_closer(tokens[end].surface) &&
           tokens[end].span.start == tokens[end - 1].span.end) {
      ++end;
    }
    emit(end);
    i = end - 1;
  }
  emit(tokens.size());
  return sentences;
}

// ---------------------------------------------------------------------------
// Noun phrases and coreference.

std::vector<Span> chunk_noun_phrases(const std::vector<Token> &tokens) {
  std::vector<Span> phrases;
  auto in_np = [](PosTag t) {
    return t == PosTag::kDeterminer || t == PosTag::kAdjective ||
           t == PosTag::kNumber || is_nominal(t);
  };
  size_t i = 0;
  while (i < tokens.size()) {
    if (!in_np(tokens[i].pos)) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    // A determiner after a nominal opens a new phrase.
    while (j < tokens.size() && in_np(tokens[j].pos) &&
           !(tokens[j].pos == PosTag::kDeterminer && is_nominal(tokens[j - 1].pos))) {
      ++j;
    }
    // Trim back to the last nominal; the remainder may start a new chunk.
    size_t last = j;
    while (last > i && !is_nominal(tokens[last - 1].pos)) --last;
    if (last > i) {
      phrases.push_back({i, last});
      i = last;
    } else {
      i = j;
    }
  }
  return phrases;
}

GrammaticalNumber noun_phrase_number(const std::vector<Token> &tokens,
                                     Span range) {
  const Token &head = tokens[range.end - 1];
  if (head.pos == PosTag::kProperNoun) return GrammaticalNumber::kSingular;
  std::string lower = ascii_lower(head.surface);
  if (ends_with(lower, "s") && !ends_with(lower, "ss") &&
      !ends_with(lower, "us") && !ends_with(lower, "is") &&
      !ends_with(lower, "'s")) {
    return GrammaticalNumber::kPlural;
  }
  return GrammaticalNumber::kSingular;
}

namespace {

struct PronounInfo {
  GrammaticalNumber number;
  bool possessive;
};

bool starts_noun_phrase(PosTag t) {
  return t == PosTag::kDeterminer || t == PosTag::kAdjective ||
         t == PosTag::kNumber || t == PosTag::kPronoun || is_nominal(t);
}

// Returns pronoun info when token `i` is a third-person pronoun that the
// resolver should rewrite.
std::optional<PronounInfo> resolvable_pronoun(const std::vector<Token> &tokens,
                                              size_t i) {
  const std::string lower = ascii_lower(tokens[i].surface);
  using GN = GrammaticalNumber;
  const bool next_is_np =
      i + 1 < tokens.size() && starts_noun_phrase(tokens[i + 1].pos);
  if (lower == "it" || lower == "he" || lower == "him" || lower == "she") {
    return PronounInfo{GN::kSingular, false};
  }
  if (lower == "they" || lower == "them") return PronounInfo{GN::kPlural, false};
  if (lower == "its" || lower == "his") return PronounInfo{GN::kSingular, true};
  if (lower == "their") return PronounInfo{GN::kPlural, true};
  if (lower == "her") return PronounInfo{GN::kSingular, next_is_np};
  if (lower == "this" || lower == "that") {
    // Only the determiner-less, non-relative use.
    if (next_is_np) return std::nullopt;
    if (i > 0) {
      PosTag p = tokens[i - 1].pos;
      if (is_nominal(p) || p == PosTag::kPronoun) return std::nullopt;
    }
    return PronounInfo{GN::kSingular, false};
  }
  return std::nullopt;
}

bool in_subject_position(const std::vector<Token> &tokens, Span np) {
  if (np.start == 0) return true;
  for (size_t j = np.end; j < tokens.size(); ++j) {
    PosTag t = tokens[j].pos;
    if (t == PosTag::kAdverb) continue;
    return t == PosTag::kVerb || t == PosTag::kModal;
  }
  return false;
}

std::vector<std::string> gaps_of(const Sentence &s) {
  std::vector<std::string> gaps;
  size_t prev_end = 0;
  for (const Token &t : s.tokens) {
    gaps.push_back(t.span.start >= prev_end
                       ? s.text.substr(prev_end, t.span.start - prev_end)
                       : std::string());
    prev_end = t.span.end;
  }
  if (!gaps.empty()) gaps[0].clear();
  return gaps;
}

struct Antecedent {
  std::vector<Token> tokens;
  std::vector<std::string> gaps;
};

}  // namespace

std::vector<Mention> find_mentions(const Sentence &sentence) {
  std::vector<Mention> mentions;
  for (Span np : chunk_noun_phrases(sentence.tokens)) {
    mentions.push_back({sentence.index, np,
                        noun_phrase_number(sentence.tokens, np),
                        Mention::Kind::kNounPhrase});
  }
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (auto info = resolvable_pronoun(sentence.tokens, i)) {
      mentions.push_back({sentence.index, {i, i + 1}, info->number,
                          Mention::Kind::kPronoun});
    }
  }
  std::sort(mentions.begin(), mentions.end(),
            [](const Mention &a, const Mention &b) {
              return a.token_range.start < b.token_range.start;
            });
  return mentions;
}

void rebuild_sentence_text(Sentence &sentence,
                           const std::vector<std::string> &gaps) {
  std::string text;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i > 0) text += gaps[i];
    Token &t = sentence.tokens[i];
    t.span.start = text.size();
    text += t.surface;
    t.span.end = text.size();
  }
  sentence.text = std::move(text);
}

std::vector<Sentence> resolve_coreference(std::vector<Sentence> sentences) {
  constexpr size_t kWindow = 2;

  for (size_t si = 0; si < sentences.size(); ++si) {
    Sentence &sentence = sentences[si];
    std::vector<std::string> gaps = gaps_of(sentence);
    bool changed = false;

    for (size_t ti = 0; ti < sentence.tokens.size(); ++ti) {
      auto info = resolvable_pronoun(sentence.tokens, ti);
      if (!info) continue;

      // Scan candidate antecedents from nearest to farthest. A subject
      // noun phrase wins over a closer non-subject one.
      std::optional<Antecedent> nearest, nearest_subject;
      for (size_t back = 0; back <= kWindow && back <= si; ++back) {
        const Sentence &source = sentences[si - back];
        std::vector<Span> nps = chunk_noun_phrases(source.tokens);
        std::vector<std::string> source_gaps = gaps_of(source);
        for (auto it = nps.rbegin(); it != nps.rend(); ++it) {
          Span np = *it;
          if (back == 0 && np.end > ti) continue;
          if (noun_phrase_number(source.tokens, np) != info->number) continue;
          Antecedent a;
          a.tokens.assign(source.tokens.begin() + np.start,
                          source.tokens.begin() + np.end);
          a.gaps.assign(source_gaps.begin() + np.start,
                        source_gaps.begin() + np.end);
          // A sentence-initial determiner loses its capital.
          if (np.start == 0 && a.tokens[0].pos != PosTag::kProperNoun) {
            std::string &s = a.tokens[0].surface;
            if (is_upper(s[0]) && !std::any_of(s.begin() + 1, s.end(), is_upper)) {
              s[0] = static_cast<char>(s[0] - 'A' + 'a');
            }
          }
          if (!nearest) nearest = a;
          if (!nearest_subject && in_subject_position(source.tokens, np)) {
            nearest_subject = a;
          }
        }
        if (nearest_subject) break;
      }
      const std::optional<Antecedent> &chosen =
          nearest_subject ? nearest_subject : nearest;
      if (!chosen) continue;

      Antecedent a = *chosen;
      if (ti == 0) {
        std::string &s = a.tokens[0].surface;
        if (s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
      }
      if (info->possessive) {
        std::string &last = a.tokens.back().surface;
        last += (!last.empty() && (last.back() == 's' || last.back() == 'S'))
                    ? "'"
                    : "'s";
      }
      a.gaps[0] = gaps[ti];
      sentence.tokens.erase(sentence.tokens.begin() + ti);
      sentence.tokens.insert(sentence.tokens.begin() + ti, a.tokens.begin(),
                             a.tokens.end());
      gaps.erase(gaps.begin() + ti);
      gaps.insert(gaps.begin() + ti, a.gaps.begin(), a.gaps.end());
      ti += a.tokens.size() - 1;
      changed = true;
      // Keep spans consistent for the antecedent search of later pronouns.
      rebuild_sentence_text(sentence, gaps);
    }
    if (changed) rebuild_sentence_text(sentence, gaps);
  }
  return sentences;
}

std::vector<Sentence> preprocess_document(const RawDocument &doc,
                                          const TextResources &resources) {
  if (trim(doc.text).empty()) {
    throw ValidationError("document '" + doc.doc_id + "' has no text");
  }
  std::vector<Token> tokens = resources.tagger.tag(tokenize(doc.text));
  return resolve_coreference(
      split_sentences(doc, tokens, resources.abbreviations));
}

std::vector<std::string> content_terms(const std::vector<Token> &tokens) {
  std::vector<std::string> terms;
  for (const Token &t : tokens) {
    if (!is_punctuation_surface(t.surface)) terms.push_back(ascii_lower(t.surface));
  }
  return terms;
}

std::vector<std::string> content_terms(std::string_view text) {
  return content_terms(tokenize(text));
}

}  // namespace docbot
