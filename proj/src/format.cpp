#include "gbg/format.hpp"

#include <json.hpp>

#include <sstream>

namespace gbg {

using nlohmann::json;

OutputFormat parse_format(const std::string& s) {
    if (s == "text") return OutputFormat::Text;
    if (s == "json") return OutputFormat::Json;
    if (s == "gap") return OutputFormat::Gap;
    throw GraphError("unknown output format '" + s + "'");
}

namespace {

json cell_json(const EmbeddedGraph& g, const CubeCell& c) {
    json verts = json::array(), edges = json::array();
    for (const Atom& a : c.atoms) {
        if (a.is_edge()) edges.push_back(g.edge_name(a.edge_index()));
        else verts.push_back(g.vertex_name(a.vnum()));
    }
    return json{{"vertices", verts}, {"edges", edges}};
}

json gword_json(const Presentation& p, const GWord& w) {
    json out = json::array();
    for (auto& [gen, sign] : w) out.push_back(json::array({p.gens[gen].name, sign}));
    return out;
}

const char* tag_name(MorseTag t) {
    switch (t) {
        case MorseTag::Redundant: return "redundant";
        case MorseTag::Collapsible: return "collapsible";
        case MorseTag::Critical: return "critical";
    }
    return "?";
}

std::string gap_word(const GWord& w) {
    if (w.empty()) return "One(F)";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += "*";
        out += "F." + std::to_string(w[i].first + 1);
        if (w[i].second < 0) out += "^-1";
    }
    return out;
}

}  // namespace

std::string render_presentation(const EmbeddedGraph& g, const Presentation& p,
                                OutputFormat fmt, bool simplified) {
    Abelian ab = abelianization(p);
    if (fmt == OutputFormat::Json) {
        json gens = json::array();
        for (const auto& gen : p.gens)
            gens.push_back(json{{"name", gen.name}, {"cell", cell_json(g, gen.cell)}});
        json rels = json::array();
        for (const GWord& r : p.rels) rels.push_back(gword_json(p, r));
        json torsion = json::array();
        for (const mpz_class& t : ab.torsion) torsion.push_back(t.get_str());
        json out{{"graph", p.graph_name},
                 {"strands", p.strands},
                 {"simplified", simplified},
                 {"generators", gens},
                 {"relators", rels},
                 {"abelianization", json{{"free_rank", ab.free_rank}, {"torsion", torsion}}}};
        return out.dump(2) + "\n";
    }
    if (fmt == OutputFormat::Gap) {
        std::ostringstream out;
        out << "# braid group presentation for graph '" << p.graph_name << "', " << p.strands
            << " strands\n";
        for (size_t i = 0; i < p.gens.size(); ++i)
            out << "# F." << i + 1 << " = " << p.gens[i].name << "\n";
        out << "F := FreeGroup( " << p.gens.size() << " );\n";
        out << "rels := [";
        for (size_t i = 0; i < p.rels.size(); ++i)
            out << (i ? ", " : " ") << gap_word(p.rels[i]);
        out << (p.rels.empty() ? "];\n" : " ];\n");
        out << "G := F / rels;\n";
        return out.str();
    }
    std::ostringstream out;
    out << "graph " << p.graph_name << "\n";
    out << "strands " << p.strands << "\n";
    out << "assumption " << (g.assumption_holds() ? "holds" : "violated") << "\n";
    if (simplified) out << "simplified yes\n";
    out << "generators " << p.gens.size() << "\n";
    for (size_t i = 0; i < p.gens.size(); ++i)
        out << "  g" << i + 1 << " = " << p.gens[i].name << "   "
            << cell_to_string(g, p.gens[i].cell) << "\n";
    out << "relators " << p.rels.size() << "\n";
    for (size_t i = 0; i < p.rels.size(); ++i)
        out << "  r" << i + 1 << " = " << gword_to_string(p, p.rels[i]) << "\n";
    out << "abelianization " << abelian_to_string(ab) << "\n";
    if (p.rels.empty()) out << "group free of rank " << p.gens.size() << "\n";
    return out.str();
}

std::string render_cells(const EmbeddedGraph& g, int n, OutputFormat fmt, size_t budget,
                         bool critical_only) {
    int maxdim = std::min(n, 2);
    if (fmt == OutputFormat::Json) {
        json dims = json::array();
        for (int d = 0; d <= maxdim; ++d) {
            json list = json::array();
            for (const CubeCell& c : enumerate_cells(g, n, d, budget)) {
                MorseClass mc = classify(g, c);
                if (critical_only && mc.tag != MorseTag::Critical) continue;
                json entry{{"cell", cell_json(g, c)}, {"class", tag_name(mc.tag)}};
                if (critical_only) entry["name"] = generator_name(g, c);
                if (mc.partner) entry["partner"] = cell_json(g, *mc.partner);
                list.push_back(std::move(entry));
            }
            dims.push_back(json{{"dim", d}, {"cells", list}});
        }
        return json{{"graph", g.name}, {"strands", n}, {"dimensions", dims}}.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "graph " << g.name << "\n";
    out << "strands " << n << "\n";
    for (int d = 0; d <= maxdim; ++d) {
        auto cells = enumerate_cells(g, n, d, budget);
        size_t shown = 0;
        std::ostringstream body;
        for (const CubeCell& c : cells) {
            MorseClass mc = classify(g, c);
            if (critical_only && mc.tag != MorseTag::Critical) continue;
            ++shown;
            body << "  " << cell_to_string(g, c);
            if (critical_only) body << "   " << generator_name(g, c);
            else body << "   " << tag_name(mc.tag);
            if (mc.partner) body << "   partner " << cell_to_string(g, *mc.partner);
            body << "\n";
        }
        out << "dim " << d << ": " << shown << (critical_only ? " critical" : "")
            << " cells\n"
            << body.str();
    }
    return out.str();
}

std::string render_homology_check(const EmbeddedGraph& g, const Abelian& from_presentation,
                                  const Abelian& from_chains, OutputFormat fmt) {
    bool ok = from_presentation == from_chains;
    if (fmt == OutputFormat::Json) {
        auto enc = [](const Abelian& a) {
            json torsion = json::array();
            for (const mpz_class& t : a.torsion) torsion.push_back(t.get_str());
            return json{{"free_rank", a.free_rank}, {"torsion", torsion}};
        };
        return json{{"graph", g.name},
                    {"presentation", enc(from_presentation)},
                    {"chain_complex", enc(from_chains)},
                    {"match", ok}}
                   .dump(2) +
               "\n";
    }
    std::ostringstream out;
    out << "graph " << g.name << "\n";
    out << "abelianized presentation: " << abelian_to_string(from_presentation) << "\n";
    out << "chain-level homology:     " << abelian_to_string(from_chains) << "\n";
    out << (ok ? "match\n" : "MISMATCH\n");
    return out.str();
}

}  // namespace gbg
