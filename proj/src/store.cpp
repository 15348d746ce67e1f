#include "treekey/store.hpp"

#include "treekey/augment.hpp"
#include "treekey/imageio.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace treekey {

namespace fs = std::filesystem;

MatchOutcome match_graphs(const PatternGraph& reference, const PatternGraph& test,
                          const FeatureWeights& weights, double tau) {
    const FeatureTable tr = compute_features(reference);
    const FeatureTable tt = compute_features(test);
    const auto [nr, nt] = normalize_features(tr, tt);

    MatchOutcome out;
    const Eigen::MatrixXd S = distance_matrix(nr, nt, weights);
    out.assignment = assign_munkres(S);

    std::vector<Vec2> ref_pts, test_pts;
    ref_pts.reserve(out.assignment.pairs.size());
    test_pts.reserve(out.assignment.pairs.size());
    for (const auto& [ri, tj] : out.assignment.pairs) {
        ref_pts.emplace_back(reference.nodes[ri].x, reference.nodes[ri].y);
        test_pts.emplace_back(test.nodes[tj].x, test.nodes[tj].y);
    }
    const CorrespondingSets sets = make_corresponding_sets(test_pts, ref_pts);
    out.transform.c_test = sets.c_test;
    out.transform.c_ref = sets.c_ref;
    try {
        out.transform.rotation = kabsch_rotation(cross_covariance(sets));
    } catch (const DegenerateInputError&) {
        out.transform.rotation = Mat2::Identity();  // translation-only fallback
    }
    const std::vector<Vec2> projected = project(test_pts, out.transform);
    out.score = score(projected, ref_pts, tau);

    // Similarity is loss relative to the reference pattern scale.
    const std::vector<Vec2> ref_nodes = [&] {
        std::vector<Vec2> v;
        for (const KeyPoint& k : reference.nodes) v.emplace_back(k.x, k.y);
        return v;
    }();
    const Vec2 c = mass_center(ref_nodes);
    const double r_mec = enclosing_radius(ref_nodes, c);
    out.similarity = similarity_score(out.score.eta, r_mec);
    return out;
}

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

namespace {

const char* kManifest = "manifest.txt";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open '" + p.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out << text;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& store_dir) {
    const fs::path mf = fs::path(store_dir) / kManifest;
    std::vector<ManifestEntry> entries;
    if (!fs::exists(mf)) return entries;
    std::ifstream in(mf);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        ManifestEntry e;
        if (!(is >> e.id >> e.graph_file >> e.config_hash >> e.weights_file))
            throw IoError("bad manifest line: " + line);
        if (!(is >> e.source)) e.source = "-";
        entries.push_back(e);
    }
    return entries;
}

std::string enroll(const PatternRecord& rec, const std::string& store_dir) {
    if (rec.id.empty()) throw Error("record id must not be empty");
    fs::create_directories(store_dir);
    for (const ManifestEntry& e : read_manifest(store_dir))
        if (e.id == rec.id) throw ConflictError("id '" + rec.id + "' already enrolled");

    const std::string graph_text = graph_to_tpg(rec.graph);
    const std::string graph_file = "g" + hex64(fnv1a64(graph_text)) + ".tpg";
    write_file(fs::path(store_dir) / graph_file, graph_text);

    std::string weights_file = "-";
    if (rec.weights) {
        const std::string wtext = weights_to_text(*rec.weights);
        weights_file = "w" + hex64(fnv1a64(wtext)) + ".wts";
        write_file(fs::path(store_dir) / weights_file, wtext);
    }

    std::ofstream mf(fs::path(store_dir) / kManifest, std::ios::app);
    if (!mf) throw IoError("cannot append to manifest");
    mf << rec.id << '\t' << graph_file << '\t' << rec.config_hash << '\t' << weights_file
       << '\t' << (rec.source.empty() ? "-" : rec.source) << '\n';
    return rec.id;
}

PatternRecord load_record(const std::string& store_dir, const ManifestEntry& e) {
    PatternRecord rec;
    rec.id = e.id;
    rec.config_hash = e.config_hash;
    rec.source = e.source == "-" ? "" : e.source;
    rec.graph = graph_from_tpg(read_file(fs::path(store_dir) / e.graph_file));
    rec.features = compute_features(rec.graph);
    if (e.weights_file != "-")
        rec.weights = weights_from_text(read_file(fs::path(store_dir) / e.weights_file));
    const std::vector<Vec2> pts = [&] {
        std::vector<Vec2> v;
        for (const KeyPoint& k : rec.graph.nodes) v.emplace_back(k.x, k.y);
        return v;
    }();
    rec.geometry.center = mass_center(pts);
    rec.geometry.r_mec = enclosing_radius(pts, rec.geometry.center);
    return rec;
}

IdentifyReport identify(const PatternRecord& test, const std::string& store_dir,
                        double tau, const std::optional<FeatureWeights>& weights_override) {
    const std::vector<ManifestEntry> entries = read_manifest(store_dir);
    if (entries.empty()) throw Error("store '" + store_dir + "' is empty");

    IdentifyReport rep;
    rep.extract_seconds = test.extract_seconds;
    const auto t0 = std::chrono::steady_clock::now();
    for (const ManifestEntry& e : entries) {
        const PatternRecord ref = load_record(store_dir, e);
        FeatureWeights w = FeatureWeights::uniform();
        if (weights_override)
            w = *weights_override;
        else if (ref.weights)
            w = *ref.weights;
        const MatchOutcome m = match_graphs(ref.graph, test.graph, w, tau);
        rep.ranked.push_back({e.id, m.similarity, m.score.eta, m.score.accuracy_pct,
                              m.score.n_pairs});
    }
    std::stable_sort(rep.ranked.begin(), rep.ranked.end(),
                     [](const IdentifyRow& a, const IdentifyRow& b) {
                         return a.similarity > b.similarity;
                     });
    rep.match_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string identify_report_to_csv(const IdentifyReport& r) {
    std::ostringstream os;
    os << "rank,id,similarity,eta,accuracy_pct,n_pairs\n";
    os.precision(10);
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
        const IdentifyRow& row = r.ranked[i];
        os << (i + 1) << ',' << row.id << ',' << row.similarity << ',' << row.eta << ','
           << row.accuracy_pct << ',' << row.n_pairs << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

BenchResult bench(const std::string& store_dir, const BenchGrid& grid,
                  const PipelineConfig& cfg, const std::string& out_dir) {
    const std::vector<ManifestEntry> entries = read_manifest(store_dir);
    if (entries.size() < 2) throw Error("bench needs at least 2 enrolled patterns");

    std::vector<PatternRecord> records;
    records.reserve(entries.size());
    for (const ManifestEntry& e : entries) records.push_back(load_record(store_dir, e));
    const int n = static_cast<int>(records.size());

    BenchResult res;
    res.similarity.resize(n, n);
    for (const PatternRecord& r : records) res.ids.push_back(r.id);

    for (int i = 0; i < n; ++i) {
        const FeatureWeights w =
            records[i].weights ? *records[i].weights : FeatureWeights::uniform();
        for (int j = 0; j < n; ++j) {
            const MatchOutcome m =
                match_graphs(records[i].graph, records[j].graph, w, cfg.tau);
            res.similarity(i, j) = m.similarity;
        }
    }

    // Robustness sweep: re-extract perturbed source images, match against the
    // stored reference of the same pattern.
    std::ostringstream rob;
    rob << "kind,param,mean_accuracy_pct,mean_eta\n";
    rob.precision(10);
    auto sweep = [&](const char* kind, const std::vector<double>& params,
                     auto&& make_spec) {
        for (double p : params) {
            double acc = 0.0, eta = 0.0;
            int count = 0;
            for (const PatternRecord& r : records) {
                if (r.source.empty() || !fs::exists(r.source)) continue;
                const RasterImage img = load_image(r.source);
                const AugmentSpec spec = make_spec(p);
                const RasterImage aug = apply_augment(img, spec);
                try {
                    const PatternRecord t = extract(aug, cfg, r.source);
                    const FeatureWeights w =
                        r.weights ? *r.weights : FeatureWeights::uniform();
                    const MatchOutcome m = match_graphs(r.graph, t.graph, w, cfg.tau);
                    acc += m.score.accuracy_pct;
                    eta += m.score.eta;
                    ++count;
                } catch (const Error&) {
                    ++count;  // a failed extraction scores zero
                }
            }
            if (count == 0) continue;
            rob << kind << ',' << p << ',' << acc / count << ',' << eta / count << '\n';
        }
    };
    sweep("rotation", grid.rotations_deg, [](double p) {
        AugmentSpec s;
        s.rotation_deg = p;
        return s;
    });
    sweep("perspective", grid.perspective_ratios, [](double p) {
        AugmentSpec s;
        s.perspective_ratio = p;
        return s;
    });
    sweep("noise", grid.noise_vars, [](double p) {
        AugmentSpec s;
        s.noise_var = p;
        s.rng_seed = 1234;
        return s;
    });
    res.robustness_csv = rob.str();

    std::ostringstream sum;
    sum << "id,keypoints,extract_seconds,self_similarity\n";
    sum.precision(10);
    for (int i = 0; i < n; ++i) {
        double secs = records[i].extract_seconds;
        if (secs == 0.0 && !records[i].source.empty() && fs::exists(records[i].source)) {
            const auto t0 = std::chrono::steady_clock::now();
            extract(load_image(records[i].source), cfg, records[i].source);
            secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count();
        }
        sum << records[i].id << ',' << records[i].graph.nodes.size() << ',' << secs << ','
            << res.similarity(i, i) << '\n';
    }
    res.summary_csv = sum.str();

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ostringstream mat;
        mat.precision(10);
        mat << "id";
        for (const std::string& id : res.ids) mat << ',' << id;
        mat << '\n';
        for (int i = 0; i < n; ++i) {
            mat << res.ids[i];
            for (int j = 0; j < n; ++j) mat << ',' << res.similarity(i, j);
            mat << '\n';
        }
        write_file(fs::path(out_dir) / "similarity_matrix.csv", mat.str());
        write_file(fs::path(out_dir) / "robustness.csv", res.robustness_csv);
        write_file(fs::path(out_dir) / "summary.csv", res.summary_csv);

        // Pixel rendering of the similarity matrix, brighter = more similar.
        const int cell = std::max(1, 256 / n);
        RasterImage png(n * cell, n * cell, 1, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int dy = 0; dy < cell; ++dy)
                    for (int dx = 0; dx < cell; ++dx)
                        png.at(j * cell + dx, i * cell + dy) =
                            std::min(1.0, std::max(0.0, res.similarity(i, j) / 100.0));
        save_png(png, (fs::path(out_dir) / "similarity_matrix.png").string());
    }
    return res;
}

}  // namespace treekey
