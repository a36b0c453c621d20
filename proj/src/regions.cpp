#include "hexinject/regions.hpp"

#include <stdexcept>

namespace hexinject {

std::string to_string(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
        case Region::MagicQubit: return "magic";
    }
    return "?";
}

namespace {

// Region geometry in working coordinates (u, w): u grows away from the
// logical line that anchors the |+>-side, w away from the |0>-side anchor.
// On ZxxzType layouts the working frame is the diagonal mirror and the
// method names swap, which realizes the protocol symmetry of the two
// XZZX orientations.
bool downleft_side(InitMethod m, int u, int w) {
    switch (m) {
        case InitMethod::DownTriangle: return u >= w;
        case InitMethod::RightTriangle: return u >= w + 4;
        case InitMethod::DownSquare: return u >= 6;
        case InitMethod::RightSquare: return !(w >= 6);
    }
    return false;
}

InitMethod dual_name(InitMethod m) {
    switch (m) {
        case InitMethod::DownTriangle: return InitMethod::RightTriangle;
        case InitMethod::RightTriangle: return InitMethod::DownTriangle;
        case InitMethod::DownSquare: return InitMethod::RightSquare;
        case InitMethod::RightSquare: return InitMethod::DownSquare;
    }
    return m;
}

}  // namespace

RegionAssignment assign_regions(const CodeLayout& layout, InitMethod method, int d1, int d2) {
    if (d1 > d2) throw std::invalid_argument("d1 must not exceed d2");
    if (d1 < 3 || d1 % 2 == 0 || d2 % 2 == 0)
        throw std::invalid_argument("d1, d2 must be odd and >= 3");
    if (layout.distance != d2) throw std::invalid_argument("layout distance must equal d2");

    RegionAssignment out;
    out.method = method;
    out.d1 = d1;
    out.d2 = d2;

    const bool dual = layout.dual_axis();
    InitMethod geo = dual ? dual_name(method) : method;

    for (const auto& q : layout.qubits) {
        if (q.role != QubitRole::Data) continue;
        int u = dual ? q.coord.col : q.coord.row;
        int w = dual ? q.coord.row : q.coord.col;
        bool primary = (q.coord.row % 4 == 0);  // vertical-edge sublattice
        bool in_d1 = q.coord.row <= 4 * (d1 - 1) && q.coord.col <= 4 * (d1 - 1);

        // The rule side of the split adjoins the working {w=0} logical line:
        // the left column on the main axis, the top row on the dual one.
        Region w0_reg = in_d1 ? (dual ? Region::I : Region::II)
                              : (dual ? Region::III : Region::IV);
        Region u0_reg = in_d1 ? (dual ? Region::II : Region::I)
                              : (dual ? Region::IV : Region::III);
        Region reg;
        if (q.id == layout.magic_qubit) {
            reg = Region::MagicQubit;
        } else if (primary && q.coord.row == 0) {
            reg = in_d1 ? Region::I : Region::III;  // top-row logical line
        } else if (primary && q.coord.col == 0) {
            reg = in_d1 ? Region::II : Region::IV;  // left-column logical line
        } else if (downleft_side(geo, u, w)) {
            reg = w0_reg;
        } else {
            reg = u0_reg;
        }
        out.region[q.id] = reg;

        Basis basis;
        if (reg == Region::MagicQubit) {
            basis = Basis::MagicProxy;
        } else {
            bool plus_side = (reg == Region::I || reg == Region::III);
            bool nominal_plus = plus_side;
            // Local Clifford frame of the code: XzzxType conjugates the
            // horizontal-edge sublattice by H, ZxxzType the vertical-edge one.
            bool flip = (layout.code_type == CodeType::XzzxType && !primary) ||
                        (layout.code_type == CodeType::ZxxzType && primary);
            basis = (nominal_plus ^ flip) ? Basis::PlusState : Basis::ZeroState;
        }
        out.init_basis[q.id] = basis;
    }
    return out;
}

}  // namespace hexinject
