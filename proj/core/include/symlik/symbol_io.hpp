#pragma once

#include <string>
#include <vector>

#include "symlik/symbols.hpp"

namespace symlik {

// Symbol JSON schema: an array of objects, one per symbol, each carrying
// "type", "n" and the type-specific fields. Parsing then re-serializing
// is bit-identical (doubles round-trip exactly).
std::string symbols_to_json(const std::vector<Symbol>& symbols);
std::vector<Symbol> symbols_from_json(const std::string& text);

void write_symbols_file(const std::string& path, const std::vector<Symbol>& symbols);
std::vector<Symbol> read_symbols_file(const std::string& path);

}  // namespace symlik
