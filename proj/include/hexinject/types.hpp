#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hexinject {

using QubitId = uint32_t;

enum class CodeType { Surface, XzzxType, ZxxzType };
enum class Structure { Lattice, HeavyHexagon };
enum class QubitRole { Data, SyndromeX, SyndromeZ, SyndromeMixed, Flag };

// Leg Paulis are X or Z only; Y never appears in a stabilizer leg.
enum class Pauli : uint8_t { X, Z };

// Orientation of a syndrome-data leg. Vertical legs are the ones that need
// flag mediation on the heavy-hexagon structure.
enum class LegOrient : uint8_t { Vertical, Horizontal };

enum class Basis : uint8_t { ZeroState, PlusState, MagicProxy };

enum class InitMethod { RightTriangle, DownTriangle, RightSquare, DownSquare };

enum class RunBasis : uint8_t { ZRun, XRun };

struct Coord {
    // Quarter-step grid, so every role (data, syndrome, flag) lands on an
    // integer point. Primary data qubits sit at multiples of 4.
    int row = 0;
    int col = 0;
    bool operator==(const Coord& o) const { return row == o.row && col == o.col; }
    bool operator<(const Coord& o) const {
        return row != o.row ? row < o.row : col < o.col;
    }
};

std::string to_string(CodeType c);
std::string to_string(Structure s);
std::string to_string(QubitRole r);
std::string to_string(InitMethod m);
std::string to_string(Basis b);

bool parse_code_type(const std::string& s, CodeType& out);
bool parse_structure(const std::string& s, Structure& out);
bool parse_init_method(const std::string& s, InitMethod& out);

}  // namespace hexinject
