// treekey: tree-structured image -> key-point graph extraction and matching.

#include "treekey/augment.hpp"
#include "treekey/imageio.hpp"
#include "treekey/pipeline.hpp"
#include "treekey/store.hpp"
#include "treekey/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace treekey;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

struct CommonOpts {
    std::string config_path;
    double alpha = -1.0;
    double tau = -1.0;
    int min_spur = -1;
};

PipelineConfig make_config(const CommonOpts& o) {
    PipelineConfig cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    if (o.alpha > 0.0) cfg.alpha = o.alpha;
    if (o.tau > 0.0) cfg.tau = o.tau;
    if (o.min_spur >= 0) cfg.min_spur = o.min_spur;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "key=value pipeline config file");
    cmd->add_option("--alpha", o.alpha, "seed circle radius as a fraction of the pattern radius");
    cmd->add_option("--tau", o.tau, "match success threshold in pixels");
    cmd->add_option("--min-spur", o.min_spur, "minimum branch length kept by spur pruning");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
}

PatternGraph load_graph_or_image(const std::string& path, const PipelineConfig& cfg,
                                 std::optional<FeatureWeights>* learned) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".tpg") return load_graph(path);
    const PatternRecord rec = extract_file(path, cfg);
    if (learned && rec.weights) *learned = rec.weights;
    return rec.graph;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"key-point graph extraction and matching for tree-structured images"};
    app.require_subcommand(1);

    // --- extract ---
    auto* c_extract = app.add_subcommand("extract", "image -> key-point graph");
    CommonOpts o_extract;
    std::string extract_input, extract_out, extract_overlay, extract_csv;
    c_extract->add_option("image", extract_input, "input image (png/pgm/ppm)")->required();
    c_extract->add_option("--out", extract_out, "output graph file (.tpg)");
    c_extract->add_option("--overlay", extract_overlay, "key-point overlay image (.png)");
    c_extract->add_option("--csv", extract_csv, "key-point table (.csv)");
    add_common(c_extract, o_extract);

    // --- enroll ---
    auto* c_enroll = app.add_subcommand("enroll", "extract and add to a store");
    CommonOpts o_enroll;
    std::string enroll_input, enroll_store, enroll_id;
    c_enroll->add_option("image", enroll_input)->required();
    c_enroll->add_option("--store", enroll_store, "store directory")->required();
    c_enroll->add_option("--id", enroll_id, "record id (default: file stem)");
    add_common(c_enroll, o_enroll);

    // --- identify ---
    auto* c_identify = app.add_subcommand("identify", "rank store entries against a query");
    CommonOpts o_identify;
    std::string id_input, id_store, id_out, id_weights;
    c_identify->add_option("image", id_input)->required();
    c_identify->add_option("--store", id_store)->required();
    c_identify->add_option("--out", id_out, "ranked report (.csv)");
    c_identify->add_option("--weights", id_weights, "weights file overriding stored weights");
    add_common(c_identify, o_identify);

    // --- match ---
    auto* c_match = app.add_subcommand("match", "score two images or graphs");
    CommonOpts o_match;
    std::string match_a, match_b, match_out, match_weights, match_overlay;
    c_match->add_option("a", match_a, "reference image or .tpg graph")->required();
    c_match->add_option("b", match_b, "test image or .tpg graph")->required();
    c_match->add_option("--out", match_out, "score file (key=value)");
    c_match->add_option("--weights", match_weights, "weights file");
    c_match->add_option("--overlay", match_overlay, "aligned overlay image (.png)");
    add_common(c_match, o_match);

    // --- bench ---
    auto* c_bench = app.add_subcommand("bench", "cross-match a store and sweep perturbations");
    CommonOpts o_bench;
    std::string bench_store, bench_out;
    c_bench->add_option("--store", bench_store)->required();
    c_bench->add_option("--out", bench_out, "output directory")->required();
    add_common(c_bench, o_bench);

    // --- augment ---
    auto* c_augment = app.add_subcommand("augment", "perturb an image");
    std::string aug_input, aug_out;
    AugmentSpec aug;
    c_augment->add_option("image", aug_input)->required();
    c_augment->add_option("--out", aug_out)->required();
    c_augment->add_option("--rot", aug.rotation_deg, "rotation in degrees");
    c_augment->add_option("--scale", aug.scale, "scale factor");
    c_augment->add_option("--persp", aug.perspective_ratio, "keystone distortion in [0,1]");
    c_augment->add_option("--noise", aug.noise_var, "Gaussian noise variance");
    c_augment->add_option("--seed", aug.rng_seed, "noise RNG seed");

    // --- synth ---
    auto* c_synth = app.add_subcommand("synth", "generate a synthetic branching pattern");
    std::string synth_out;
    SynthParams sp;
    c_synth->add_option("--out", synth_out)->required();
    c_synth->add_option("--seed", sp.rng_seed);
    c_synth->add_option("--particles", sp.particles);
    c_synth->add_option("--canvas", sp.canvas);
    c_synth->add_option("--stickiness", sp.stickiness);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*c_extract) {
            const PipelineConfig cfg = make_config(o_extract);
            ExtractArtifacts art;
            const PatternRecord rec = extract_file(extract_input, cfg, &art);
            std::cout << "keypoints=" << rec.graph.nodes.size() << '\n'
                      << "steps=" << rec.stats.steps_total << '\n'
                      << "windows=" << rec.stats.windows_spawned << '\n'
                      << "r_mec=" << rec.geometry.r_mec << '\n'
                      << "seconds=" << rec.extract_seconds << '\n';
            if (!extract_out.empty()) save_graph(rec.graph, extract_out);
            if (!extract_csv.empty()) write_text(extract_csv, keypoints_to_csv(rec.graph.nodes));
            if (!extract_overlay.empty())
                save_image(render_keypoints_overlay(art.skeleton, rec.graph.nodes),
                           extract_overlay);
        } else if (*c_enroll) {
            const PipelineConfig cfg = make_config(o_enroll);
            PatternRecord rec = extract_file(enroll_input, cfg);
            if (!enroll_id.empty()) rec.id = enroll_id;
            enroll(rec, enroll_store);
            std::cout << "enrolled=" << rec.id << '\n';
        } else if (*c_identify) {
            const PipelineConfig cfg = make_config(o_identify);
            std::optional<FeatureWeights> override;
            if (!id_weights.empty()) {
                std::ifstream in(id_weights);
                if (!in) throw IoError("cannot open weights '" + id_weights + "'");
                std::ostringstream os;
                os << in.rdbuf();
                override = weights_from_text(os.str());
            }
            const PatternRecord test = extract_file(id_input, cfg);
            const IdentifyReport rep = identify(test, id_store, cfg.tau, override);
            const std::string csv = identify_report_to_csv(rep);
            std::cout << csv;
            if (!id_out.empty()) write_text(id_out, csv);
        } else if (*c_match) {
            const PipelineConfig cfg = make_config(o_match);
            std::optional<FeatureWeights> learned;
            const PatternGraph a = load_graph_or_image(match_a, cfg, &learned);
            const PatternGraph b = load_graph_or_image(match_b, cfg, nullptr);
            FeatureWeights w = FeatureWeights::uniform();
            if (!match_weights.empty()) {
                std::ifstream in(match_weights);
                if (!in) throw IoError("cannot open weights '" + match_weights + "'");
                std::ostringstream os;
                os << in.rdbuf();
                w = weights_from_text(os.str());
            } else if (learned) {
                w = *learned;
            }
            const MatchOutcome m = match_graphs(a, b, w, cfg.tau);
            std::ostringstream os;
            os.precision(10);
            os << "similarity=" << m.similarity << '\n'
               << "eta=" << m.score.eta << '\n'
               << "accuracy_pct=" << m.score.accuracy_pct << '\n'
               << "n_pairs=" << m.score.n_pairs << '\n';
            std::cout << os.str();
            if (!match_out.empty()) write_text(match_out, os.str());
            if (!match_overlay.empty()) {
                std::vector<Vec2> ref_pts, test_pts;
                for (const auto& [ri, tj] : m.assignment.pairs) {
                    ref_pts.emplace_back(a.nodes[ri].x, a.nodes[ri].y);
                    test_pts.emplace_back(b.nodes[tj].x, b.nodes[tj].y);
                }
                save_image(render_alignment_overlay(ref_pts, project(test_pts, m.transform),
                                                    a.width, a.height),
                           match_overlay);
            }
        } else if (*c_bench) {
            const PipelineConfig cfg = make_config(o_bench);
            const BenchResult res = bench(bench_store, BenchGrid{}, cfg, bench_out);
            std::cout << "patterns=" << res.ids.size() << '\n'
                      << "outputs=" << bench_out << '\n';
        } else if (*c_augment) {
            save_image(apply_augment(load_image(aug_input), aug), aug_out);
        } else if (*c_synth) {
            save_image(generate_dendrite(sp), synth_out);
        }
    } catch (const PipelineError& e) {
        std::cerr << "pipeline error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const IoError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ConflictError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPipeline;
    }
    return kExitOk;
}
