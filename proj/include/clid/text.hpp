/*
 * Copyright 2026 The clid Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLID_TEXT_HPP
#define CLID_TEXT_HPP

#include <string>
#include <vector>

namespace clid::text {

// Decodes UTF-8 into codepoints. Invalid bytes decode to U+FFFD.
std::vector<char32_t> utf8_decode(const std::string& s);

std::string utf8_encode(const std::vector<char32_t>& cps);
std::string utf8_encode_one(char32_t cp);

// Letter test over the Latin, Latin-supplement/extended, Greek and Cyrillic
// blocks (the scripts that occur in the supported corpora).
bool is_letter(char32_t cp);

char32_t to_lower(char32_t cp);

// Base letter with diacritics stripped, e.g. á→a, ŵ→w. Identity for
// unaccented letters and anything outside the covered blocks.
char32_t strip_diacritic(char32_t cp);

// Vowel rule: base letter in {a,e,i,o,u,w,y} after diacritic stripping
// (w/y count as vowels, as in Welsh orthography).
bool is_vowel(char32_t cp);

}  // namespace clid::text

#endif  // CLID_TEXT_HPP
