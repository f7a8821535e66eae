// gbg: graph braid group presentations from the command line.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "gbg/format.hpp"

namespace {

struct RunConfig {
    std::string graph_path;
    int strands = 2;
    std::string format = "text";
    bool simplify = false;
    bool no_closed_forms = false;
    bool ignore_tree = false;
    bool verbose = false;
    int jobs = 1;
    long long seed = 0;  // reserved for reproducibility of future sampling flags
    size_t budget = 0;
};

gbg::EmbeddedGraph prepare(const RunConfig& cfg) {
    gbg::EmbeddedGraph g = gbg::load_graph_file(cfg.graph_path);
    if (cfg.ignore_tree) g.clear_declarations();
    g = gbg::subdivide_for(g, cfg.strands);
    return gbg::choose_tree(g);
}

gbg::Presentation present(const gbg::EmbeddedGraph& g, const RunConfig& cfg) {
    gbg::PresentOptions opts;
    opts.use_closed_forms = !cfg.no_closed_forms;
    opts.jobs = cfg.jobs;
    opts.budget = cfg.budget;
    if (cfg.verbose) {
        for (const gbg::CubeCell& sq : gbg::critical_cells(g, cfg.strands, 2, cfg.budget)) {
            std::cerr << "reducing boundary of " << gbg::cell_to_string(g, sq) << "\n";
            gbg::m_infinity_steps(g, gbg::boundary_word(g, sq), gbg::Strategy::Leftmost,
                                  [&](const gbg::TraceEntry& t) {
                                      std::cerr << "  " << t.move << " @" << t.position
                                                << " -> " << gbg::word_to_string(g, t.word)
                                                << "\n";
                                  });
        }
    }
    return gbg::presentation(g, cfg.strands, opts);
}

int run(const RunConfig& cfg, const std::string& cmd) {
    gbg::OutputFormat fmt = gbg::parse_format(cfg.format);
    gbg::EmbeddedGraph g = prepare(cfg);

    if (cmd == "present") {
        gbg::Presentation p = present(g, cfg);
        if (cfg.simplify) p = gbg::tietze_simplify(p);
        std::cout << gbg::render_presentation(g, p, fmt, cfg.simplify);
        return 0;
    }
    if (cmd == "cells" || cmd == "critical") {
        std::cout << gbg::render_cells(g, cfg.strands, fmt, cfg.budget, cmd == "critical");
        return 0;
    }
    if (cmd == "homology-check") {
        gbg::Presentation p = present(g, cfg);
        gbg::Abelian from_pres = gbg::abelianization(p);
        gbg::Abelian from_chains = gbg::h1(g, cfg.strands, cfg.budget);
        std::cout << gbg::render_homology_check(g, from_pres, from_chains, fmt);
        return from_pres == from_chains ? 0 : 1;
    }
    if (cmd == "conjecture-check") {
        RunConfig c2 = cfg;
        c2.strands = 2;
        gbg::EmbeddedGraph g2 = prepare(c2);
        gbg::Presentation p = present(g2, c2);
        size_t commutators = 0;
        for (const gbg::GWord& r : p.rels)
            if (gbg::commutator_form_check(r)) ++commutators;
        bool all = commutators == p.rels.size();
        std::cout << "graph " << g2.name << "\n"
                  << "relators " << p.rels.size() << "\n"
                  << "commutators " << commutators << "\n"
                  << (all ? "all relators are commutators\n"
                          : "some relators are not commutators in this presentation\n");
        return 0;
    }
    throw gbg::GraphError("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite presentations of graph braid groups"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("GBG_CELL_BUDGET")) cfg.budget = std::strtoull(env, nullptr, 10);

    auto add_common = [&](CLI::App* sub, bool with_strands = true) {
        sub->add_option("--graph", cfg.graph_path, "graph file")->required();
        if (with_strands) sub->add_option("--strands", cfg.strands, "number of strands");
        sub->add_option("--format", cfg.format, "text|json|gap");
        sub->add_flag("--simplify", cfg.simplify, "apply Tietze simplification");
        sub->add_flag("--no-closed-forms", cfg.no_closed_forms,
                      "compute every cost by rewriting");
        sub->add_flag("--ignore-tree", cfg.ignore_tree,
                      "drop the declared basepoint/tree and choose afresh");
        sub->add_flag("--verbose", cfg.verbose, "print the rewriting trace to stderr");
        sub->add_option("--jobs", cfg.jobs, "worker threads for relators")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "seed (reserved; output is deterministic)");
    };
    add_common(app.add_subcommand("present", "print a presentation"));
    add_common(app.add_subcommand("cells", "list cells with their matching classes"));
    add_common(app.add_subcommand("critical", "list critical cells in vector notation"));
    add_common(app.add_subcommand("homology-check",
                                  "compare abelianized presentation with chain homology"));
    add_common(app.add_subcommand("conjecture-check",
                                  "report whether all two-strand relators are commutators"),
               false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cfg.strands < 1) {
            std::cerr << "error: --strands must be at least 1\n";
            return 1;
        }
        return run(cfg, app.get_subcommands().front()->get_name());
    } catch (const gbg::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gbg::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gbg::GraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
