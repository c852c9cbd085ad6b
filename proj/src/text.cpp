// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

// Word tokenization for transcript statistics. Covers the Unicode ranges
// that show up in English and European audiobook transcripts; no ICU.

#include "voxgauge/dataset.hpp"

#include <cstdint>

namespace voxgauge {
namespace {

// Decodes one UTF-8 sequence starting at text[i]. Invalid bytes decode as
// themselves (one byte, codepoint = byte value | 0x110000 so they never
// collide with real characters).
char32_t next_codepoint(std::string_view text, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    auto cont = [&](std::size_t k) -> int {
        if (i + k >= text.size()) return -1;
        const auto b = static_cast<unsigned char>(text[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    }
    for (int k = 1; k < len; ++k) {
        const int c = cont(static_cast<std::size_t>(k));
        if (c < 0) {
            len = 0;
            break;
        }
        cp = (cp << 6) | static_cast<char32_t>(c);
    }
    if (len == 0) {
        ++i;
        return 0x110000 | b0;
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp >= 0x110000) {
        out.push_back(static_cast<char>(cp & 0xFF));
    } else if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

// General category P* (connector, dash, open/close, initial/final, other).
bool is_punctuation(char32_t cp) {
    if (cp < 0x80) {
        switch (cp) {
            case '!': case '"': case '#': case '%': case '&': case '\'': case '(': case ')':
            case '*': case ',': case '-': case '.': case '/': case ':': case ';': case '?':
            case '@': case '[': case '\\': case ']': case '_': case '{': case '}':
                return true;
            default:
                return false;
        }
    }
    switch (cp) {
        case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7: case 0x00BB: case 0x00BF:
        case 0x037E: case 0x0387: case 0x055A: case 0x055B: case 0x055C: case 0x055D: case 0x055E:
        case 0x055F: case 0x0589: case 0x058A: case 0x05BE: case 0x05C0: case 0x05C3: case 0x05C6:
        case 0x05F3: case 0x05F4: case 0x060C: case 0x061B: case 0x061F:
        case 0x06D4: case 0x0964: case 0x0965: case 0x3030: case 0x303D: case 0x30A0: case 0x30FB:
        case 0xFF3F: case 0xFF5B: case 0xFF5D:
            return true;
        default:
            break;
    }
    return in(cp, 0x2010, 0x2027) || in(cp, 0x2030, 0x2043) || in(cp, 0x2045, 0x2051) ||
           in(cp, 0x2053, 0x205E) || in(cp, 0x2E00, 0x2E2E) ||
           in(cp, 0x2E30, 0x2E4F) || in(cp, 0x3001, 0x3003) ||
           in(cp, 0x3008, 0x3011) || in(cp, 0x3014, 0x301F) || in(cp, 0xFE10, 0xFE19) ||
           in(cp, 0xFE30, 0xFE4F) || in(cp, 0xFF01, 0xFF03) || in(cp, 0xFF05, 0xFF0A) ||
           in(cp, 0xFF0C, 0xFF0F) || in(cp, 0xFF1A, 0xFF1B) || in(cp, 0xFF1F, 0xFF20) ||
           in(cp, 0xFF3B, 0xFF3D) || in(cp, 0xFF5F, 0xFF65);
}

bool is_space(char32_t cp) {
    return cp == ' ' || in(cp, 0x09, 0x0D) || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
           in(cp, 0x2000, 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
           cp == 0x3000;
}

char32_t to_lower(char32_t cp) {
    if (in(cp, 'A', 'Z')) return cp + 0x20;
    if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
    if (in(cp, 0x0100, 0x0137) || in(cp, 0x014A, 0x0177)) return cp | 1;
    if (in(cp, 0x0139, 0x0148) || in(cp, 0x0179, 0x017E)) return (cp & 1) ? cp + 1 : cp;
    if (cp == 0x0178) return 0xFF;
    if (in(cp, 0x0391, 0x03A9) && cp != 0x03A2) return cp + 0x20;
    if (in(cp, 0x0410, 0x042F)) return cp + 0x20;
    if (in(cp, 0x0400, 0x040F)) return cp + 0x50;
    return cp;
}

}  // namespace

std::vector<std::string> tokenize_words(std::string_view transcript) {
    std::vector<std::string> words;
    std::string current;
    std::size_t i = 0;
    while (i < transcript.size()) {
        const char32_t cp = next_codepoint(transcript, i);
        if (is_space(cp)) {
            if (!current.empty()) words.push_back(std::move(current));
            current.clear();
        } else if (!is_punctuation(cp)) {
            append_utf8(current, to_lower(cp));
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

}  // namespace voxgauge
