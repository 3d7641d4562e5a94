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

#ifndef STACKPROP_UNICODE_TEXT_H_
#define STACKPROP_UNICODE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace stackprop {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);

// Character classes used by the tagger features. Case mapping covers ASCII,
// Latin-1, Latin Extended-A, Greek and Cyrillic; other scripts are treated
// as caseless letters.
char32_t ToLower(char32_t c);
bool IsUpper(char32_t c);
bool IsLower(char32_t c);
bool IsLetter(char32_t c);
bool IsDigit(char32_t c);
bool IsHyphen(char32_t c);

// Unicode general category P* (connector, dash, open, close, initial, final
// and other punctuation) for the common blocks.
bool IsPunctuation(char32_t c);

std::string Lowercase(std::string_view text);

// True when the text is non-empty and every character is punctuation.
bool IsPunctuationToken(std::string_view text);

}  // namespace stackprop

#endif  // STACKPROP_UNICODE_TEXT_H_
