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

#include "clid/text.hpp"

namespace clid::text {

std::vector<char32_t> utf8_decode(const std::string& s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    const auto n = s.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < n) {
            const unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            if ((b1 & 0xC0) == 0x80) {
                cp = ((b0 & 0x1Fu) << 6) | (b1 & 0x3Fu);
                len = 2;
            }
        } else if ((b0 & 0xF0) == 0xE0 && i + 2 < n) {
            const unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            const unsigned char b2 = static_cast<unsigned char>(s[i + 2]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
                cp = ((b0 & 0x0Fu) << 12) | ((b1 & 0x3Fu) << 6) | (b2 & 0x3Fu);
                len = 3;
            }
        } else if ((b0 & 0xF8) == 0xF0 && i + 3 < n) {
            const unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            const unsigned char b2 = static_cast<unsigned char>(s[i + 2]);
            const unsigned char b3 = static_cast<unsigned char>(s[i + 3]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 && (b3 & 0xC0) == 0x80) {
                cp = ((b0 & 0x07u) << 18) | ((b1 & 0x3Fu) << 12) | ((b2 & 0x3Fu) << 6) |
                     (b3 & 0x3Fu);
                len = 4;
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode_one(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) out += utf8_encode_one(cp);
    return out;
}

bool is_letter(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    if (cp >= 0xC0 && cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
    if (cp >= 0x100 && cp <= 0x24F) return true;    // Latin Extended-A/B
    if (cp >= 0x1E00 && cp <= 0x1EFF) return true;  // Latin Extended Additional
    if (cp >= 0x370 && cp <= 0x3FF)                 // Greek
        return cp != 0x374 && cp != 0x375 && cp != 0x37E && cp != 0x384 && cp != 0x385 &&
               cp != 0x387;
    if (cp >= 0x400 && cp <= 0x4FF) return true;  // Cyrillic
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    // Latin Extended-A: alternating upper/lower pairs, with a few irregular runs.
    if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;  // Ÿ → ÿ
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x1E00 && cp <= 0x1EFF) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

namespace {

// Base letters for U+00E0..U+00FF (lowercase Latin-1 supplement).
constexpr const char kLatin1Base[] = "aaaaaaaceeeeiiiidnooooo.ouuuuyty";

// Base letters for U+0100..U+017F (Latin Extended-A), both cases.
constexpr const char kExtABase[] =
    "aaaaaa"      // 0x100-0x105 A-ogonek family
    "cccccccc"    // 0x106-0x10D
    "dddd"        // 0x10E-0x111
    "eeeeeeeeee"  // 0x112-0x11B
    "gggggggg"    // 0x11C-0x123
    "hhhh"        // 0x124-0x127
    "iiiiiiiiii"  // 0x128-0x131
    "iijj"        // 0x132-0x135 (ĳ ligature → i)
    "kkk"         // 0x136-0x138
    "llllllllll"  // 0x139-0x142
    "nnnnnnnnn"   // 0x143-0x14B
    "oooooooo"    // 0x14C-0x153 (œ → o)
    "rrrrrr"      // 0x154-0x159
    "ssssssss"    // 0x15A-0x161
    "tttttt"      // 0x162-0x167
    "uuuuuuuuuuuu"  // 0x168-0x173
    "ww"            // 0x174-0x175
    "yyy"           // 0x176-0x178
    "zzzzzz"        // 0x179-0x17E
    "s";            // 0x17F long s

}  // namespace

char32_t strip_diacritic(char32_t cp) {
    cp = to_lower(cp);
    if (cp >= 0xE0 && cp <= 0xFF) return static_cast<char32_t>(kLatin1Base[cp - 0xE0]);
    if (cp >= 0x100 && cp <= 0x17F) return static_cast<char32_t>(kExtABase[cp - 0x100]);
    if (cp >= 0x1E00 && cp <= 0x1EFF) {
        if (cp >= 0x1E80 && cp <= 0x1E89) return U'w';
        if (cp >= 0x1EF2 && cp <= 0x1EF9) return U'y';
        if (cp >= 0x1EA0 && cp <= 0x1EB7) return U'a';
        if (cp >= 0x1EB8 && cp <= 0x1EC7) return U'e';
        if (cp >= 0x1EC8 && cp <= 0x1ECB) return U'i';
        if (cp >= 0x1ECC && cp <= 0x1EE3) return U'o';
        if (cp >= 0x1EE4 && cp <= 0x1EF1) return U'u';
        if (cp >= 0x1E00 && cp <= 0x1E01) return U'a';
        if (cp >= 0x1E02 && cp <= 0x1E07) return U'b';
        if (cp >= 0x1E08 && cp <= 0x1E09) return U'c';
        if (cp >= 0x1E0A && cp <= 0x1E13) return U'd';
        if (cp >= 0x1E14 && cp <= 0x1E1D) return U'e';
        if (cp >= 0x1E1E && cp <= 0x1E1F) return U'f';
        if (cp >= 0x1E20 && cp <= 0x1E21) return U'g';
        if (cp >= 0x1E22 && cp <= 0x1E2B) return U'h';
        if (cp >= 0x1E2C && cp <= 0x1E2F) return U'i';
        if (cp >= 0x1E30 && cp <= 0x1E35) return U'k';
        if (cp >= 0x1E36 && cp <= 0x1E3D) return U'l';
        if (cp >= 0x1E3E && cp <= 0x1E43) return U'm';
        if (cp >= 0x1E44 && cp <= 0x1E4B) return U'n';
        if (cp >= 0x1E4C && cp <= 0x1E53) return U'o';
        if (cp >= 0x1E54 && cp <= 0x1E57) return U'p';
        if (cp >= 0x1E58 && cp <= 0x1E5F) return U'r';
        if (cp >= 0x1E60 && cp <= 0x1E69) return U's';
        if (cp >= 0x1E6A && cp <= 0x1E71) return U't';
        if (cp >= 0x1E72 && cp <= 0x1E7B) return U'u';
        if (cp >= 0x1E7C && cp <= 0x1E7F) return U'v';
        if (cp >= 0x1E8A && cp <= 0x1E8D) return U'x';
        if (cp >= 0x1E8E && cp <= 0x1E8F) return U'y';
        if (cp >= 0x1E90 && cp <= 0x1E95) return U'z';
        return cp;
    }
    return cp;
}

bool is_vowel(char32_t cp) {
    const char32_t base = strip_diacritic(cp);
    switch (base) {
        case U'a':
        case U'e':
        case U'i':
        case U'o':
        case U'u':
        case U'w':
        case U'y':
            return true;
        default:
            return false;
    }
}

}  // namespace clid::text
