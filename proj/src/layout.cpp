#include "hexinject/layout.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hexinject {

std::string to_string(CodeType c) {
    switch (c) {
        case CodeType::Surface: return "surface";
        case CodeType::XzzxType: return "xzzx";
        case CodeType::ZxxzType: return "zxxz";
    }
    return "?";
}
std::string to_string(Structure s) {
    return s == Structure::Lattice ? "lattice" : "heavy-hex";
}
std::string to_string(QubitRole r) {
    switch (r) {
        case QubitRole::Data: return "data";
        case QubitRole::SyndromeX: return "syndrome-x";
        case QubitRole::SyndromeZ: return "syndrome-z";
        case QubitRole::SyndromeMixed: return "syndrome-m";
        case QubitRole::Flag: return "flag";
    }
    return "?";
}
std::string to_string(InitMethod m) {
    switch (m) {
        case InitMethod::RightTriangle: return "right-triangle";
        case InitMethod::DownTriangle: return "down-triangle";
        case InitMethod::RightSquare: return "right-square";
        case InitMethod::DownSquare: return "down-square";
    }
    return "?";
}
std::string to_string(Basis b) {
    switch (b) {
        case Basis::ZeroState: return "zero";
        case Basis::PlusState: return "plus";
        case Basis::MagicProxy: return "magic";
    }
    return "?";
}

bool parse_code_type(const std::string& s, CodeType& out) {
    if (s == "surface") out = CodeType::Surface;
    else if (s == "xzzx") out = CodeType::XzzxType;
    else if (s == "zxxz") out = CodeType::ZxxzType;
    else return false;
    return true;
}
bool parse_structure(const std::string& s, Structure& out) {
    if (s == "lattice") out = Structure::Lattice;
    else if (s == "heavy-hex" || s == "heavy-hexagon") out = Structure::HeavyHexagon;
    else return false;
    return true;
}
bool parse_init_method(const std::string& s, InitMethod& out) {
    if (s == "right-triangle") out = InitMethod::RightTriangle;
    else if (s == "down-triangle") out = InitMethod::DownTriangle;
    else if (s == "right-square") out = InitMethod::RightSquare;
    else if (s == "down-square") out = InitMethod::DownSquare;
    else return false;
    return true;
}

size_t CodeLayout::count_role(QubitRole r) const {
    size_t n = 0;
    for (const auto& q : qubits)
        if (q.role == r) n++;
    return n;
}

namespace {

struct SortKey {
    bool dual;
    std::pair<int, int> operator()(const Coord& c) const {
        return dual ? std::make_pair(c.col, c.row) : std::make_pair(c.row, c.col);
    }
};

// Abstract lattice elements, before id assignment.
struct ProtoLeg {
    Coord data;
    Pauli pauli;
    LegOrient orient;
};
struct ProtoStab {
    Coord syndrome;
    bool star;  // vertex star vs face plaquette
    std::vector<ProtoLeg> legs;
};

Coord v_pos(int r, int c) { return {4 * r, 4 * c}; }
Coord h_pos(int r, int c) { return {4 * r - 2, 4 * c + 2}; }
Coord star_pos(int r, int c) { return {4 * r - 2, 4 * c}; }
Coord plaq_pos(int r, int c) { return {4 * r, 4 * c + 2}; }

Pauli leg_pauli(CodeType code, bool star, LegOrient orient) {
    switch (code) {
        case CodeType::Surface: return star ? Pauli::X : Pauli::Z;
        case CodeType::XzzxType: return orient == LegOrient::Vertical ? Pauli::X : Pauli::Z;
        case CodeType::ZxxzType: return orient == LegOrient::Vertical ? Pauli::Z : Pauli::X;
    }
    return Pauli::X;
}

}  // namespace

CodeLayout build_layout(CodeType code, Structure structure, int distance,
                        const BuildOptions& opts) {
    if (distance < 3 || distance % 2 == 0)
        throw std::invalid_argument("distance must be odd and >= 3");
    const int d = distance;

    std::vector<ProtoStab> protos;
    for (int r = 1; r < d; r++) {
        for (int c = 0; c < d; c++) {
            ProtoStab s;
            s.syndrome = star_pos(r, c);
            s.star = true;
            s.legs.push_back({v_pos(r - 1, c), Pauli::X, LegOrient::Vertical});
            s.legs.push_back({v_pos(r, c), Pauli::X, LegOrient::Vertical});
            if (c >= 1) s.legs.push_back({h_pos(r, c - 1), Pauli::X, LegOrient::Horizontal});
            if (c <= d - 2) s.legs.push_back({h_pos(r, c), Pauli::X, LegOrient::Horizontal});
            protos.push_back(std::move(s));
        }
    }
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d - 1; c++) {
            ProtoStab s;
            s.syndrome = plaq_pos(r, c);
            s.star = false;
            if (r >= 1) s.legs.push_back({h_pos(r, c), Pauli::X, LegOrient::Vertical});
            if (r + 1 <= d - 1) s.legs.push_back({h_pos(r + 1, c), Pauli::X, LegOrient::Vertical});
            s.legs.push_back({v_pos(r, c), Pauli::X, LegOrient::Horizontal});
            s.legs.push_back({v_pos(r, c + 1), Pauli::X, LegOrient::Horizontal});
            protos.push_back(std::move(s));
        }
    }
    for (auto& p : protos)
        for (auto& l : p.legs) l.pauli = leg_pauli(code, p.star, l.orient);

    CodeLayout layout;
    layout.code_type = code;
    layout.structure = structure;
    layout.distance = d;
    SortKey key{layout.dual_axis()};

    // Data qubits.
    std::vector<Coord> data_coords;
    for (int r = 0; r < d; r++)
        for (int c = 0; c < d; c++) data_coords.push_back(v_pos(r, c));
    for (int r = 1; r < d; r++)
        for (int c = 0; c < d - 1; c++) data_coords.push_back(h_pos(r, c));
    std::sort(data_coords.begin(), data_coords.end(),
              [&](const Coord& a, const Coord& b) { return key(a) < key(b); });

    std::map<Coord, QubitId> id_of;
    for (const auto& c : data_coords) {
        QubitId id = (QubitId)layout.qubits.size();
        id_of[c] = id;
        layout.qubits.push_back({id, c, QubitRole::Data});
    }

    // Syndrome qubits.
    std::sort(protos.begin(), protos.end(), [&](const ProtoStab& a, const ProtoStab& b) {
        return key(a.syndrome) < key(b.syndrome);
    });
    for (const auto& p : protos) {
        QubitId id = (QubitId)layout.qubits.size();
        id_of[p.syndrome] = id;
        QubitRole role = QubitRole::SyndromeMixed;
        if (code == CodeType::Surface)
            role = p.star ? QubitRole::SyndromeX : QubitRole::SyndromeZ;
        layout.qubits.push_back({id, p.syndrome, role});
    }

    // Flag qubits (heavy-hexagon only): one chain flag per stabilizer plus a
    // shared flag next to every vertically coupled data qubit. This keeps
    // every interaction degree at 3 or below.
    std::map<Coord, QubitId> flag_of;
    if (structure == Structure::HeavyHexagon) {
        std::vector<Coord> flag_coords;
        auto add_flag = [&](Coord c) {
            if (!flag_of.count(c)) {
                flag_of[c] = 1;  // placeholder, re-indexed below
                flag_coords.push_back(c);
            }
        };
        int proto_index = 0;
        for (const auto& p : protos) {
            bool any_vertical = false;
            int leg_index = 0;
            for (const auto& l : p.legs) {
                if (l.orient == LegOrient::Vertical) {
                    any_vertical = true;
                    // Shared data-side flag.
                    Coord dc = l.data;
                    Coord f2 = (dc.row % 4 == 0) ? Coord{dc.row - 1, dc.col}
                                                 : Coord{dc.row, dc.col - 1};
                    add_flag(f2);
                    for (int k = 0; k < opts.extra_flags_per_leg; k++)
                        add_flag({-10 - proto_index, -10 - (leg_index * 8 + k)});
                }
                leg_index++;
            }
            if (any_vertical) {
                Coord sc = p.syndrome;
                Coord f1 = p.star ? Coord{sc.row - 1, sc.col} : Coord{sc.row, sc.col + 1};
                add_flag(f1);
            }
            proto_index++;
        }
        std::sort(flag_coords.begin(), flag_coords.end(),
                  [&](const Coord& a, const Coord& b) { return key(a) < key(b); });
        for (const auto& c : flag_coords) {
            QubitId id = (QubitId)layout.qubits.size();
            flag_of[c] = id;
            id_of[c] = id;
            layout.qubits.push_back({id, c, QubitRole::Flag});
        }
    }

    // Stabilizer specs with routed legs.
    int proto_index = 0;
    for (const auto& p : protos) {
        StabilizerSpec spec;
        spec.syndrome = id_of.at(p.syndrome);
        std::vector<ProtoLeg> legs = p.legs;
        std::sort(legs.begin(), legs.end(), [&](const ProtoLeg& a, const ProtoLeg& b) {
            return key(a.data) < key(b.data);
        });
        int leg_index = 0;
        for (const auto& l : legs) {
            Leg leg;
            leg.data = id_of.at(l.data);
            leg.pauli = l.pauli;
            leg.orient = l.orient;
            if (structure == Structure::HeavyHexagon && l.orient == LegOrient::Vertical) {
                Coord sc = p.syndrome;
                Coord f1 = p.star ? Coord{sc.row - 1, sc.col} : Coord{sc.row, sc.col + 1};
                Coord dc = l.data;
                Coord f2 = (dc.row % 4 == 0) ? Coord{dc.row - 1, dc.col}
                                             : Coord{dc.row, dc.col - 1};
                leg.route.push_back(flag_of.at(f1));
                // Original leg index in proto order, for extra-flag lookup.
                int orig_index = 0;
                for (size_t i = 0; i < p.legs.size(); i++)
                    if (p.legs[i].data == l.data) orig_index = (int)i;
                for (int k = 0; k < opts.extra_flags_per_leg; k++)
                    leg.route.push_back(flag_of.at({-10 - proto_index, -10 - (orig_index * 8 + k)}));
                leg.route.push_back(flag_of.at(f2));
            }
            spec.legs.push_back(std::move(leg));
            leg_index++;
        }
        layout.stabilizers.push_back(std::move(spec));
        proto_index++;
    }

    // Logical operators on the primary (vertical-edge) grid. The magic qubit
    // sits at the shared top-left corner.
    LogicalOperatorSpec col_op, row_op;
    for (int r = 0; r < d; r++) col_op.support.push_back(id_of.at(v_pos(r, 0)));
    for (int c = 0; c < d; c++) row_op.support.push_back(id_of.at(v_pos(0, c)));
    if (code == CodeType::ZxxzType) {
        col_op.pauli = Pauli::X;
        row_op.pauli = Pauli::Z;
        layout.logical_x = col_op;
        layout.logical_z = row_op;
    } else {
        col_op.pauli = Pauli::Z;
        row_op.pauli = Pauli::X;
        layout.logical_z = col_op;
        layout.logical_x = row_op;
    }
    layout.magic_qubit = id_of.at(v_pos(0, 0));
    return layout;
}

std::pair<LogicalOperatorSpec, LogicalOperatorSpec> logical_supports(const CodeLayout& layout) {
    return {layout.logical_x, layout.logical_z};
}

CodeLayout diagonal_reflect(const CodeLayout& layout) {
    CodeLayout out;
    out.structure = layout.structure;
    out.distance = layout.distance;
    switch (layout.code_type) {
        case CodeType::Surface: out.code_type = CodeType::Surface; break;
        case CodeType::XzzxType: out.code_type = CodeType::ZxxzType; break;
        case CodeType::ZxxzType: out.code_type = CodeType::XzzxType; break;
    }
    SortKey key{out.dual_axis()};

    // Transpose coordinates, then re-index canonically (data, syndromes,
    // flags; each class sorted in the reflected layout's working order).
    std::vector<QubitInfo> transposed = layout.qubits;
    for (auto& q : transposed) std::swap(q.coord.row, q.coord.col);

    auto cls = [](QubitRole r) {
        if (r == QubitRole::Data) return 0;
        if (r == QubitRole::Flag) return 2;
        return 1;
    };
    std::vector<size_t> order(transposed.size());
    for (size_t i = 0; i < order.size(); i++) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        int ca = cls(transposed[a].role), cb = cls(transposed[b].role);
        if (ca != cb) return ca < cb;
        return key(transposed[a].coord) < key(transposed[b].coord);
    });
    std::vector<QubitId> remap(transposed.size());
    for (size_t i = 0; i < order.size(); i++) {
        remap[transposed[order[i]].id] = (QubitId)i;
        QubitInfo q = transposed[order[i]];
        q.id = (QubitId)i;
        out.qubits.push_back(q);
    }

    for (const auto& s : layout.stabilizers) {
        StabilizerSpec ns;
        ns.syndrome = remap[s.syndrome];
        for (const auto& l : s.legs) {
            Leg nl;
            nl.data = remap[l.data];
            nl.pauli = l.pauli;
            nl.orient = l.orient == LegOrient::Vertical ? LegOrient::Horizontal
                                                        : LegOrient::Vertical;
            for (QubitId f : l.route) nl.route.push_back(remap[f]);
            ns.legs.push_back(std::move(nl));
        }
        std::sort(ns.legs.begin(), ns.legs.end(), [&](const Leg& a, const Leg& b) {
            return key(out.qubits[a.data].coord) < key(out.qubits[b.data].coord);
        });
        out.stabilizers.push_back(std::move(ns));
    }
    std::sort(out.stabilizers.begin(), out.stabilizers.end(),
              [&](const StabilizerSpec& a, const StabilizerSpec& b) {
                  return key(out.qubits[a.syndrome].coord) < key(out.qubits[b.syndrome].coord);
              });

    auto remap_logical = [&](const LogicalOperatorSpec& l) {
        LogicalOperatorSpec nl;
        nl.pauli = l.pauli;
        for (QubitId q : l.support) nl.support.push_back(remap[q]);
        std::sort(nl.support.begin(), nl.support.end());
        return nl;
    };
    out.logical_x = remap_logical(layout.logical_x);
    out.logical_z = remap_logical(layout.logical_z);
    out.magic_qubit = remap[layout.magic_qubit];
    return out;
}

namespace {

// Verifies that mapping qubits of `a` to the qubit of `b` at `coord_map`
// of their coordinate preserves all structure.
std::optional<std::vector<QubitId>> try_coord_map(const CodeLayout& a, const CodeLayout& b,
                                                  bool transpose) {
    if (a.qubits.size() != b.qubits.size() || a.stabilizers.size() != b.stabilizers.size())
        return std::nullopt;
    std::map<Coord, QubitId> b_at;
    for (const auto& q : b.qubits) b_at[q.coord] = q.id;
    std::vector<QubitId> map(a.qubits.size());
    for (const auto& q : a.qubits) {
        Coord c = q.coord;
        if (transpose) std::swap(c.row, c.col);
        auto it = b_at.find(c);
        if (it == b_at.end()) return std::nullopt;
        map[q.id] = it->second;
        if (b.qubits[it->second].role != q.role) return std::nullopt;
    }
    if (map[a.magic_qubit] != b.magic_qubit) return std::nullopt;

    auto leg_sig = [](const Leg& l, QubitId mapped_data) {
        return std::make_tuple(mapped_data, l.pauli, l.route.size());
    };
    std::map<QubitId, const StabilizerSpec*> b_stab;
    for (const auto& s : b.stabilizers) b_stab[s.syndrome] = &s;
    for (const auto& s : a.stabilizers) {
        auto it = b_stab.find(map[s.syndrome]);
        if (it == b_stab.end()) return std::nullopt;
        const StabilizerSpec& t = *it->second;
        if (t.legs.size() != s.legs.size()) return std::nullopt;
        std::vector<std::tuple<QubitId, Pauli, size_t>> la, lb;
        for (const auto& l : s.legs) la.push_back(leg_sig(l, map[l.data]));
        for (const auto& l : t.legs) lb.push_back(leg_sig(l, l.data));
        std::sort(la.begin(), la.end());
        std::sort(lb.begin(), lb.end());
        if (la != lb) return std::nullopt;
        // Routed flags must correspond.
        std::set<QubitId> fa, fb;
        for (const auto& l : s.legs)
            for (QubitId f : l.route) fa.insert(map[f]);
        for (const auto& l : t.legs)
            for (QubitId f : l.route) fb.insert(f);
        if (fa != fb) return std::nullopt;
    }
    auto check_logical = [&](const LogicalOperatorSpec& la, const LogicalOperatorSpec& lb) {
        if (la.pauli != lb.pauli || la.support.size() != lb.support.size()) return false;
        std::set<QubitId> sa, sb(lb.support.begin(), lb.support.end());
        for (QubitId q : la.support) sa.insert(map[q]);
        return sa == sb;
    };
    if (!check_logical(a.logical_x, b.logical_x)) return std::nullopt;
    if (!check_logical(a.logical_z, b.logical_z)) return std::nullopt;
    return map;
}

}  // namespace

std::optional<std::vector<QubitId>> find_layout_isomorphism(const CodeLayout& a,
                                                            const CodeLayout& b) {
    if (auto m = try_coord_map(a, b, false)) return m;
    if (auto m = try_coord_map(a, b, true)) return m;
    return std::nullopt;
}

std::string dump_layout(const CodeLayout& layout) {
    std::ostringstream os;
    os << "layout " << to_string(layout.code_type) << " " << to_string(layout.structure)
       << " d=" << layout.distance << "\n";
    for (const auto& q : layout.qubits)
        os << "Q " << q.id << " " << to_string(q.role) << " " << q.coord.row << " "
           << q.coord.col << "\n";
    std::vector<const StabilizerSpec*> stabs;
    for (const auto& s : layout.stabilizers) stabs.push_back(&s);
    std::sort(stabs.begin(), stabs.end(),
              [](const StabilizerSpec* a, const StabilizerSpec* b) {
                  return a->syndrome < b->syndrome;
              });
    for (const auto* s : stabs) {
        os << "S " << s->syndrome;
        for (const auto& l : s->legs) {
            os << " " << l.data << ":" << (l.pauli == Pauli::X ? 'X' : 'Z') << ":";
            for (size_t i = 0; i < l.route.size(); i++)
                os << (i ? "," : "") << l.route[i];
        }
        os << "\n";
    }
    auto dump_logical = [&](char name, const LogicalOperatorSpec& l) {
        os << "L " << name << " " << (l.pauli == Pauli::X ? 'X' : 'Z');
        std::vector<QubitId> sup = l.support;
        std::sort(sup.begin(), sup.end());
        for (QubitId q : sup) os << " " << q;
        os << "\n";
    };
    dump_logical('X', layout.logical_x);
    dump_logical('Z', layout.logical_z);
    os << "M " << layout.magic_qubit << "\n";
    return os.str();
}

int max_interaction_degree(const CodeLayout& layout) {
    std::vector<std::set<QubitId>> adj(layout.qubits.size());
    auto link = [&](QubitId a, QubitId b) {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    for (const auto& s : layout.stabilizers) {
        for (const auto& l : s.legs) {
            if (l.route.empty()) {
                link(s.syndrome, l.data);
            } else {
                link(s.syndrome, l.route.front());
                for (size_t i = 0; i + 1 < l.route.size(); i++) link(l.route[i], l.route[i + 1]);
                link(l.route.back(), l.data);
            }
        }
    }
    int best = 0;
    for (const auto& s : adj) best = std::max(best, (int)s.size());
    return best;
}

namespace {

struct PauliVec {
    std::vector<uint8_t> x, z;
    explicit PauliVec(size_t n) : x(n, 0), z(n, 0) {}
    void mult(size_t q, Pauli p) {
        if (p == Pauli::X) x[q] ^= 1;
        else z[q] ^= 1;
    }
    bool commutes(const PauliVec& o) const {
        int t = 0;
        for (size_t i = 0; i < x.size(); i++) t ^= (x[i] & o.z[i]) ^ (z[i] & o.x[i]);
        return t == 0;
    }
};

PauliVec stab_vec(const CodeLayout& layout, const StabilizerSpec& s) {
    PauliVec v(layout.qubits.size());
    for (const auto& l : s.legs) v.mult(l.data, l.pauli);
    return v;
}

PauliVec logical_vec(const CodeLayout& layout, const LogicalOperatorSpec& l) {
    PauliVec v(layout.qubits.size());
    for (QubitId q : l.support) v.mult(q, l.pauli);
    return v;
}

}  // namespace

bool check_commutation(const CodeLayout& layout) {
    std::vector<PauliVec> vs;
    for (const auto& s : layout.stabilizers) vs.push_back(stab_vec(layout, s));
    for (size_t i = 0; i < vs.size(); i++)
        for (size_t j = i + 1; j < vs.size(); j++)
            if (!vs[i].commutes(vs[j])) return false;
    PauliVec lx = logical_vec(layout, layout.logical_x);
    PauliVec lz = logical_vec(layout, layout.logical_z);
    for (const auto& v : vs)
        if (!v.commutes(lx) || !v.commutes(lz)) return false;
    return !lx.commutes(lz);
}

int stabilizer_rank(const CodeLayout& layout) {
    size_t n = layout.qubits.size();
    std::vector<std::vector<uint8_t>> rows;
    for (const auto& s : layout.stabilizers) {
        PauliVec v = stab_vec(layout, s);
        std::vector<uint8_t> row(2 * n);
        for (size_t i = 0; i < n; i++) {
            row[i] = v.x[i];
            row[n + i] = v.z[i];
        }
        rows.push_back(std::move(row));
    }
    int rank = 0;
    size_t col = 0;
    for (; col < 2 * n && rank < (int)rows.size(); col++) {
        int pivot = -1;
        for (size_t r = rank; r < rows.size(); r++)
            if (rows[r][col]) {
                pivot = (int)r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < rows.size(); r++)
            if ((int)r != rank && rows[r][col])
                for (size_t k = 0; k < 2 * n; k++) rows[r][k] ^= rows[rank][k];
        rank++;
    }
    return rank;
}

}  // namespace hexinject
