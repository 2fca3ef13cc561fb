// Command-line front end for the grammar-genome composition engine.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gram/adaptive/automaton.h"
#include "gram/adaptive/heart_rate.h"
#include "gram/analysis/distance.h"
#include "gram/analysis/features.h"
#include "gram/atonal/rewrite.h"
#include "gram/core/errors.h"
#include "gram/evolve/evolve.h"
#include "gram/hypersong/hypersong.h"
#include "gram/interpret/clean.h"
#include "gram/interpret/interpret.h"
#include "gram/interpret/stabilize.h"
#include "gram/notation/exchange.h"
#include "gram/notation/midi.h"
#include "gram/notation/musicxml.h"
#include "gram/style/builder.h"
#include "gram/style/style.h"
#include "gram/tonal/develop.h"

namespace {

namespace fs = std::filesystem;

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

bool has_format(const std::string& formats, const std::string& name) {
    return formats.find(name) != std::string::npos;
}

gram::Composition develop_genome_file(const std::string& path, gram::Rational& base_duration) {
    const fs::path p(path);
    gram::interpret::Options lenient{gram::interpret::Mode::Lenient};
    if (p.extension() == ".gen") {
        const auto genome = gram::atonal::parse_gen_file(path);
        const auto seq = gram::interpret::clean_string(gram::atonal::rewrite(genome));
        base_duration = gram::Rational(
            static_cast<std::int64_t>(genome.base_duration * 1000 + 0.5), 1000);
        return gram::interpret::interpret_atonal(seq, genome, {}, lenient).composition;
    }
    if (p.extension() == ".evg") {
        const auto genome = gram::tonal::parse_evg_file(path);
        const auto seq = gram::interpret::clean_string(gram::tonal::develop(genome));
        base_duration = genome.globals.base_duration;
        return gram::interpret::interpret_tonal(seq, genome, {}, lenient).composition;
    }
    throw gram::ParseError("genome files end in .gen or .evg: " + path);
}

void export_composition(const gram::Composition& comp, const std::string& out_dir,
                        const std::string& stem, const std::string& formats) {
    fs::create_directories(out_dir);
    if (has_format(formats, "midi"))
        gram::notation::write_midi_file(comp, out_dir + "/" + stem + ".mid");
    if (has_format(formats, "xml"))
        gram::notation::write_musicxml_file(comp, out_dir + "/" + stem + ".musicxml");
    if (has_format(formats, "exchange"))
        gram::notation::write_exchange_file(comp, out_dir + "/" + stem + ".json");
}

std::vector<gram::adaptive::TraceSample> load_trace(const std::string& path) {
    // One "t input" pair per line; blank input or "-" means null.
    std::ifstream in(path);
    if (!in) throw gram::ParseError("cannot open " + path);
    std::vector<gram::adaptive::TraceSample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        gram::adaptive::TraceSample sample;
        std::string input;
        fields >> sample.t >> input;
        if (!input.empty() && input != "-") sample.input = std::stoi(input);
        out.push_back(sample);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gramophone: grammar-genome composition engine"};
    app.require_subcommand(1);

    std::uint64_t seed = entropy_seed();
    app.add_option("--seed", seed, "random seed (echoed into run manifests)")->capture_default_str();
    int workers = 1;
    if (const char* env = std::getenv("GRAM_WORKERS")) workers = std::max(1, std::atoi(env));
    app.add_option("--workers", workers, "worker threads for compose (env GRAM_WORKERS)")
        ->capture_default_str();

    // develop: genome file -> composition + exports
    auto* develop = app.add_subcommand("develop", "develop a .gen/.evg genome and export it");
    std::string dev_genome, dev_out = "out", dev_formats = "midi,xml,exchange";
    develop->add_option("--gen,--genome", dev_genome, "genome file (.gen or .evg)")->required();
    develop->add_option("--out", dev_out, "output directory")->capture_default_str();
    develop->add_option("--formats", dev_formats, "comma list: midi,xml,exchange")
        ->capture_default_str();

    // compose: style -> evolved compositions
    auto* compose = app.add_subcommand("compose", "evolve compositions from a style");
    std::string cmp_style, cmp_out = "out";
    std::uint64_t cmp_budget = 1000;
    std::size_t cmp_accepts = 0;
    compose->add_option("--style", cmp_style, "style JSON file")->required();
    compose->add_option("--out", cmp_out, "output directory")->capture_default_str();
    compose->add_option("--budget", cmp_budget, "max candidate evaluations")->capture_default_str();
    compose->add_option("--max-accepts", cmp_accepts, "stop after this many accepts (0 = all)");

    // mutate / crossover
    auto* mutate = app.add_subcommand("mutate", "mutate a genome file");
    std::string mut_genome, mut_out;
    int mut_count = 1;
    mutate->add_option("--gen,--genome", mut_genome, "genome file")->required();
    mutate->add_option("--out", mut_out, "output genome path")->required();
    mutate->add_option("--count", mut_count, "number of mutations")->capture_default_str();

    auto* crossover = app.add_subcommand("crossover", "cross two genome files");
    std::string crs_a, crs_b, crs_out;
    crossover->add_option("--a", crs_a, "first parent")->required();
    crossover->add_option("--b", crs_b, "second parent")->required();
    crossover->add_option("--out", crs_out, "output genome path")->required();

    // hypersong
    auto* hyper = app.add_subcommand("hypersong", "generate a versions x fragments bundle");
    std::string hyp_style, hyp_out = "hypersong", hyp_versions, hyp_prefix = "hypersong";
    double hyp_tail = 1.5;
    hyper->add_option("--style", hyp_style, "style JSON file")->required();
    hyper->add_option("--versions", hyp_versions, "version plan JSON file")->required();
    hyper->add_option("--out", hyp_out, "bundle directory")->capture_default_str();
    hyper->add_option("--prefix", hyp_prefix, "metaThemePrefix")->capture_default_str();
    hyper->add_option("--tail", hyp_tail, "decay tail seconds")->capture_default_str();

    // adapt-sim
    auto* adapt = app.add_subcommand("adapt-sim", "replay an input trace through a DFA");
    std::string ada_dfa, ada_trace, ada_bundle, ada_out;
    adapt->add_option("--dfa", ada_dfa, "DFA JSON document")->required();
    adapt->add_option("--trace", ada_trace, "trace file (lines: t input|-)")->required();
    adapt->add_option("--bundle", ada_bundle, "optional hypersong bundle directory");
    adapt->add_option("--out", ada_out, "write the timeline JSON here (default stdout)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "extract features and distances for a corpus");
    std::vector<std::string> ana_inputs;
    std::string ana_out;
    analyze->add_option("files", ana_inputs, "MIDI files")->required()->expected(-1);
    analyze->add_option("--out", ana_out, "write the report here (default stdout)");

    // style check
    auto* style_cmd = app.add_subcommand("style", "style file utilities");
    auto* style_check = style_cmd->add_subcommand("check", "validate a style document");
    std::string chk_style;
    style_check->add_option("file", chk_style, "style JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (*develop) {
            gram::Rational base(1);
            auto comp = develop_genome_file(dev_genome, base);
            comp = gram::interpret::stabilize(comp, {base});
            comp.meta.name = fs::path(dev_genome).stem().string();
            export_composition(comp, dev_out, comp.meta.name, dev_formats);
            std::cout << "developed " << dev_genome << " -> " << dev_out << "/" << comp.meta.name
                      << ".{" << dev_formats << "}\n";
        } else if (*compose) {
            const auto style = gram::style::load_style_file(cmp_style);
            gram::evolve::LoopOptions options;
            options.budget = cmp_budget;
            options.max_accepts = cmp_accepts;
            options.workers = workers;
            const auto result = gram::evolve::run_generation_loop(style, seed, options);
            fs::create_directories(cmp_out);
            for (const auto& accepted : result.accepted)
                export_composition(accepted.composition, cmp_out, accepted.composition.meta.name,
                                   "midi,exchange");
            std::ofstream manifest(cmp_out + "/manifest.json", std::ios::binary);
            manifest << result.manifest_json;
            std::cout << "accepted " << result.accepted.size() << " composition(s) in "
                      << result.evaluations << " evaluations -> " << cmp_out << "\n";
            if (result.accepted.empty()) return 1;
        } else if (*mutate) {
            gram::Rng rng(seed);
            const fs::path p(mut_genome);
            if (p.extension() == ".gen") {
                auto genome = gram::atonal::parse_gen_file(mut_genome);
                for (int i = 0; i < mut_count; ++i)
                    genome = gram::evolve::mutate_atonal(genome, rng);
                std::ofstream out(mut_out, std::ios::binary);
                out << gram::atonal::serialize_gen(genome);
            } else {
                auto genome = gram::tonal::parse_evg_file(mut_genome);
                for (int i = 0; i < mut_count; ++i)
                    genome = gram::evolve::mutate_tonal(genome, rng);
                std::ofstream out(mut_out, std::ios::binary);
                out << gram::tonal::serialize_evg(genome);
            }
            std::cout << "mutated " << mut_genome << " x" << mut_count << " -> " << mut_out << "\n";
        } else if (*crossover) {
            gram::Rng rng(seed);
            const fs::path p(crs_a);
            if (p.extension() == ".gen") {
                const auto child = gram::evolve::crossover_atonal(
                    gram::atonal::parse_gen_file(crs_a), gram::atonal::parse_gen_file(crs_b), rng);
                std::ofstream out(crs_out, std::ios::binary);
                out << gram::atonal::serialize_gen(child);
            } else {
                const auto child = gram::evolve::crossover_tonal(
                    gram::tonal::parse_evg_file(crs_a), gram::tonal::parse_evg_file(crs_b), rng);
                std::ofstream out(crs_out, std::ios::binary);
                out << gram::tonal::serialize_evg(child);
            }
            std::cout << "crossed " << crs_a << " x " << crs_b << " -> " << crs_out << "\n";
        } else if (*hyper) {
            const auto style = gram::style::load_style_file(hyp_style);
            std::ifstream plan_in(hyp_versions);
            if (!plan_in) throw gram::ParseError("cannot open " + hyp_versions);
            nlohmann::json plan_doc = nlohmann::json::parse(plan_in);
            gram::style::HypersongStylePlan plan;
            plan.free_parameters = plan_doc.value("free", std::vector<std::string>{});
            for (const auto& v : plan_doc.at("versions")) {
                gram::style::VersionParams params;
                if (v.contains("tempo")) params.tempo = v["tempo"].get<double>();
                if (v.contains("dynamic")) params.dynamic = v["dynamic"].get<int>();
                if (v.contains("roles")) {
                    std::vector<int> roles;
                    for (const auto& r : v["roles"]) {
                        if (r.is_number_integer()) { roles.push_back(r.get<int>()); continue; }
                        const auto& names = gram::style::role_family_names();
                        const std::string name = r.get<std::string>();
                        for (std::size_t i = 0; i < names.size(); ++i)
                            if (names[i] == name) roles.push_back(static_cast<int>(i));
                    }
                    params.roles = roles;
                }
                plan.versions.push_back(params);
            }
            gram::hypersong::GenerateOptions options;
            options.tail_seconds = hyp_tail;
            options.name_prefix = hyp_prefix;
            const auto song = gram::hypersong::generate_hypersong(style, plan, seed, options);
            gram::hypersong::write_bundle(song, hyp_out);
            std::cout << "hypersong: " << song.manifest.version_count << " version(s) x "
                      << song.manifest.fragment_count << " fragment(s) -> " << hyp_out << "\n";
        } else if (*adapt) {
            const auto automaton = gram::adaptive::load_dfa_file(ada_dfa);
            const auto trace = load_trace(ada_trace);
            const auto timeline = gram::adaptive::simulate(automaton, trace);
            const std::string text = gram::adaptive::timeline_json(timeline);
            if (ada_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(ada_out, std::ios::binary);
                out << text;
                std::cout << "timeline -> " << ada_out << "\n";
            }
        } else if (*analyze) {
            std::vector<gram::analysis::FeatureVector> vectors;
            for (const auto& file : ana_inputs) {
                std::ifstream in(file, std::ios::binary);
                if (!in) throw gram::ParseError("cannot open " + file);
                std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                                std::istreambuf_iterator<char>());
                vectors.push_back(gram::analysis::extract_features_midi(bytes));
            }
            const auto center = gram::analysis::centroid(vectors);
            std::ostringstream report;
            report << "file\trank_distance\n";
            for (std::size_t i = 0; i < vectors.size(); ++i)
                report << ana_inputs[i] << '\t'
                       << gram::analysis::distance_rank(vectors[i], center, vectors) << '\n';
            if (ana_out.empty()) {
                std::cout << report.str();
            } else {
                std::ofstream out(ana_out, std::ios::binary);
                out << report.str();
                std::cout << "report -> " << ana_out << "\n";
            }
        } else if (*style_check) {
            gram::style::load_style_file(chk_style);
            std::cout << chk_style << ": ok\n";
        }
    } catch (const gram::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
