// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <string_view>

namespace tg {

// Porter (1980) suffix-stripping stemmer for lowercase ASCII words.
std::string porter_stem(std::string_view word);

}  // namespace tg
