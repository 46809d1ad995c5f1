#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "detlab/lattice.hpp"
#include "detlab/numeric.hpp"
#include "detlab/polymatroid.hpp"

namespace detlab {

using Json = nlohmann::ordered_json;

// Parsed instance file. Exactly one of the two payloads is populated,
// selected by kind. Optional metadata rides along untouched so a rewrite
// of the file preserves it.
struct InstanceDoc {
    enum class Kind { subspace, lattice };

    Kind kind = Kind::subspace;
    std::string name;     // optional display name, empty when absent
    std::string warning;  // optional generator annotation
    Json expect;          // optional expected-results object, null when absent

    // subspace payload
    bool prime_field = false;
    std::uint64_t field_p = 0;
    int ambient = 0;
    std::vector<std::vector<std::vector<Rat>>> generators;  // per subspace, rows

    // lattice payload
    LatticePointTuple lattice;
};

// Entries are integers as JSON numbers or rationals as "p/q" strings.
inline Rat parse_rat_entry(const Json& v) {
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            return Rat(s);
        } catch (const std::exception&) {
            throw InputError("bad rational literal \"" + s + "\"");
        }
    }
    throw InputError("matrix entries must be integers or \"p/q\" strings");
}

inline Json rat_entry_json(const Rat& x) {
    if (denominator(x) == 1) {
        const Int n = numerator(x);
        if (n >= std::numeric_limits<long long>::min() &&
            n <= std::numeric_limits<long long>::max())
            return Json(n.convert_to<long long>());
    }
    return Json(x.str());
}

inline int parse_checked_int(const Json& v, const std::string& what) {
    if (!v.is_number_integer()) throw InputError(what + " must be an integer");
    const long long n = v.get<long long>();
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
        throw InputError(what + " is out of range");
    return static_cast<int>(n);
}

inline void parse_common_metadata(const Json& j, InstanceDoc& doc) {
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw InputError("name must be a string");
        doc.name = j["name"].get<std::string>();
    }
    if (j.contains("warning")) {
        if (!j["warning"].is_string()) throw InputError("warning must be a string");
        doc.warning = j["warning"].get<std::string>();
    }
    if (j.contains("expect")) {
        if (!j["expect"].is_object()) throw InputError("expect must be an object");
        doc.expect = j["expect"];
    }
}

inline void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const auto& a : allowed)
            if (key == a) known = true;
        if (!known) throw InputError("unknown key \"" + key + "\" in instance file");
    }
}

inline InstanceDoc parse_subspace_doc(const Json& j) {
    reject_unknown_keys(j, {"type", "field", "ambient_dim", "subspaces", "name", "warning",
                            "expect"});
    InstanceDoc doc;
    doc.kind = InstanceDoc::Kind::subspace;
    parse_common_metadata(j, doc);

    if (!j.contains("field") || !j["field"].is_object())
        throw InputError("subspace instance needs a field object");
    const Json& field = j["field"];
    reject_unknown_keys(field, {"kind", "p"});
    if (!field.contains("kind") || !field["kind"].is_string())
        throw InputError("field needs a kind");
    const std::string fk = field["kind"].get<std::string>();
    if (fk == "rationals") {
        if (field.contains("p")) throw InputError("the rational field takes no p");
    } else if (fk == "prime") {
        if (!field.contains("p") || !field["p"].is_number_integer())
            throw InputError("prime field needs an integer p");
        const long long p = field["p"].get<long long>();
        if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
            throw InputError("field p must be prime");
        doc.prime_field = true;
        doc.field_p = static_cast<std::uint64_t>(p);
    } else {
        throw InputError("field kind must be \"rationals\" or \"prime\"");
    }

    if (!j.contains("ambient_dim")) throw InputError("subspace instance needs ambient_dim");
    doc.ambient = parse_checked_int(j["ambient_dim"], "ambient_dim");
    if (doc.ambient < 1) throw InputError("ambient_dim must be positive");

    if (!j.contains("subspaces") || !j["subspaces"].is_array() || j["subspaces"].empty())
        throw InputError("subspace instance needs a nonempty subspaces array");
    for (const Json& sub : j["subspaces"]) {
        if (!sub.is_array()) throw InputError("each subspace must be an array of rows");
        std::vector<std::vector<Rat>> rows;
        for (const Json& row : sub) {
            if (!row.is_array() || static_cast<int>(row.size()) != doc.ambient)
                throw InputError("each generator row must have ambient_dim entries");
            std::vector<Rat> r;
            for (const Json& e : row) r.push_back(parse_rat_entry(e));
            rows.push_back(std::move(r));
        }
        doc.generators.push_back(std::move(rows));
    }
    if (doc.generators.size() > 32) throw InputError("tuple length exceeds 32");
    return doc;
}

inline InstanceDoc parse_lattice_doc(const Json& j) {
    reject_unknown_keys(j, {"type", "ambient_rank", "sets", "name", "warning", "expect"});
    InstanceDoc doc;
    doc.kind = InstanceDoc::Kind::lattice;
    parse_common_metadata(j, doc);

    if (!j.contains("ambient_rank")) throw InputError("lattice instance needs ambient_rank");
    doc.lattice.ambient_rank = parse_checked_int(j["ambient_rank"], "ambient_rank");

    if (!j.contains("sets") || !j["sets"].is_array())
        throw InputError("lattice instance needs a sets array");
    for (const Json& set : j["sets"]) {
        if (!set.is_array()) throw InputError("each point set must be an array of points");
        std::vector<std::vector<int>> pts;
        for (const Json& pt : set) {
            if (!pt.is_array() || static_cast<int>(pt.size()) != doc.lattice.ambient_rank)
                throw InputError("each point must have ambient_rank coordinates");
            std::vector<int> coords;
            for (const Json& c : pt) coords.push_back(parse_checked_int(c, "point coordinate"));
            pts.push_back(std::move(coords));
        }
        doc.lattice.sets.push_back(std::move(pts));
    }
    validate_lattice_tuple(doc.lattice);
    return doc;
}

inline InstanceDoc parse_instance(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("instance must be a JSON object");
    if (!j.contains("type") || !j["type"].is_string())
        throw InputError("instance needs a type field");
    const std::string type = j["type"].get<std::string>();
    if (type == "subspace-tuple") return parse_subspace_doc(j);
    if (type == "lattice-tuple") return parse_lattice_doc(j);
    throw InputError("unknown instance type \"" + type + "\"");
}

inline InstanceDoc load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read instance file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

// Canonical form: fixed key order, two-space indent, trailing newline.
// Parsing the output reproduces the document byte for byte.
inline std::string serialize_instance(const InstanceDoc& doc) {
    Json j;
    if (doc.kind == InstanceDoc::Kind::subspace) {
        j["type"] = "subspace-tuple";
        Json field;
        if (doc.prime_field) {
            field["kind"] = "prime";
            field["p"] = doc.field_p;
        } else {
            field["kind"] = "rationals";
        }
        j["field"] = field;
        j["ambient_dim"] = doc.ambient;
        Json subs = Json::array();
        for (const auto& gen : doc.generators) {
            Json rows = Json::array();
            for (const auto& row : gen) {
                Json r = Json::array();
                for (const auto& e : row) r.push_back(rat_entry_json(e));
                rows.push_back(std::move(r));
            }
            subs.push_back(std::move(rows));
        }
        j["subspaces"] = std::move(subs);
    } else {
        j["type"] = "lattice-tuple";
        j["ambient_rank"] = doc.lattice.ambient_rank;
        Json sets = Json::array();
        for (const auto& set : doc.lattice.sets) {
            Json pts = Json::array();
            for (const auto& pt : set) {
                Json coords = Json::array();
                for (int c : pt) coords.push_back(c);
                pts.push_back(std::move(coords));
            }
            sets.push_back(std::move(pts));
        }
        j["sets"] = std::move(sets);
    }
    if (!doc.name.empty()) j["name"] = doc.name;
    if (!doc.warning.empty()) j["warning"] = doc.warning;
    if (!doc.expect.is_null()) j["expect"] = doc.expect;
    return j.dump(2) + "\n";
}

// FNV-1a over the canonical serialization; identifies the instance in reports.
inline std::string instance_digest(const InstanceDoc& doc) {
    const std::string s = serialize_instance(doc);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline SubspaceTuple<Rat> to_rat_tuple(const InstanceDoc& doc) {
    if (doc.kind != InstanceDoc::Kind::subspace)
        throw InputError("expected a subspace-tuple instance");
    if (doc.prime_field)
        throw InputError("instance lives over a prime field, not the rationals");
    std::vector<Matrix<Rat>> gens;
    for (const auto& g : doc.generators) {
        Matrix<Rat> m(static_cast<int>(g.size()), doc.ambient, RatCtx{});
        for (std::size_t r = 0; r < g.size(); ++r)
            for (int c = 0; c < doc.ambient; ++c) m.at(static_cast<int>(r), c) = g[r][c];
        gens.push_back(std::move(m));
    }
    return make_subspace_tuple(gens, doc.ambient, RatCtx{});
}

inline SubspaceTuple<Fp> to_fp_tuple(const InstanceDoc& doc) {
    if (doc.kind != InstanceDoc::Kind::subspace)
        throw InputError("expected a subspace-tuple instance");
    if (!doc.prime_field) throw InputError("instance lives over the rationals, not a prime field");
    FpCtx ctx{doc.field_p};
    std::vector<Matrix<Fp>> gens;
    for (const auto& g : doc.generators) {
        Matrix<Fp> m(static_cast<int>(g.size()), doc.ambient, ctx);
        for (std::size_t r = 0; r < g.size(); ++r)
            for (int c = 0; c < doc.ambient; ++c)
                m.at(static_cast<int>(r), c) = rat_mod_p(g[r][c], doc.field_p);
        gens.push_back(std::move(m));
    }
    return make_subspace_tuple(gens, doc.ambient, ctx);
}

// The rational subspace tuple a command works on: the generators themselves
// for a rational subspace doc, the spans of the point sets for a lattice doc.
inline SubspaceTuple<Rat> rat_tuple_of(const InstanceDoc& doc) {
    if (doc.kind == InstanceDoc::Kind::lattice) return spans(doc.lattice);
    return to_rat_tuple(doc);
}

}  // namespace detlab
