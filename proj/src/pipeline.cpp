#include "treekey/pipeline.hpp"

#include "treekey/color.hpp"
#include "treekey/fusion.hpp"
#include "treekey/imageio.hpp"
#include "treekey/skeleton.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace treekey {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i];
    }
    return s;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

std::string config_to_text(const PipelineConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    std::vector<std::string> spaces;
    if (cfg.use_gray) spaces.push_back("gray");
    if (cfg.use_yuv) spaces.push_back("yuv");
    if (cfg.use_hsv) spaces.push_back("hsv");
    if (cfg.use_orig) spaces.push_back("orig");
    std::vector<std::string> filters;
    if (cfg.filt_laplacian) filters.push_back("laplacian");
    if (cfg.filt_sobel) filters.push_back("sobel");
    if (cfg.filt_gabor) filters.push_back("gabor");
    os << "colorspaces=" << join(spaces) << '\n';
    os << "filters=" << (filters.empty() ? "none" : join(filters)) << '\n';
    os << "filter_sources=" << join(cfg.filter_sources) << '\n';
    os << "k=" << cfg.kmeans_k << '\n';
    os << "foreground=" << to_string(cfg.fg_rule) << '\n';
    os << "min_spur=" << cfg.min_spur << '\n';
    os << "alpha=" << cfg.alpha << '\n';
    os << "max_steps=" << cfg.max_steps << '\n';
    os << "tau=" << cfg.tau << '\n';
    os << "learn_weights=" << (cfg.learn_weights ? 1 : 0) << '\n';
    os << "aug_seed=" << cfg.aug_seed << '\n';
    return os.str();
}

PipelineConfig config_from_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("bad config line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "colorspaces") {
            cfg.use_gray = cfg.use_yuv = cfg.use_hsv = cfg.use_orig = false;
            for (const std::string& s : split_csv(val)) {
                if (s == "gray") cfg.use_gray = true;
                else if (s == "yuv") cfg.use_yuv = true;
                else if (s == "hsv") cfg.use_hsv = true;
                else if (s == "orig") cfg.use_orig = true;
                else throw IoError("unknown color space '" + s + "'");
            }
        } else if (key == "filters") {
            cfg.filt_laplacian = cfg.filt_sobel = cfg.filt_gabor = false;
            for (const std::string& s : split_csv(val)) {
                if (s == "laplacian") cfg.filt_laplacian = true;
                else if (s == "sobel") cfg.filt_sobel = true;
                else if (s == "gabor") cfg.filt_gabor = true;
                else if (s == "none") continue;
                else throw IoError("unknown filter '" + s + "'");
            }
        } else if (key == "filter_sources") {
            cfg.filter_sources = split_csv(val);
        } else if (key == "k") {
            cfg.kmeans_k = std::stoi(val);
        } else if (key == "foreground") {
            cfg.fg_rule = foreground_rule_from_string(val);
        } else if (key == "min_spur") {
            cfg.min_spur = std::stoi(val);
        } else if (key == "alpha") {
            cfg.alpha = std::stod(val);
        } else if (key == "max_steps") {
            cfg.max_steps = std::stoll(val);
        } else if (key == "tau") {
            cfg.tau = std::stod(val);
        } else if (key == "learn_weights") {
            cfg.learn_weights = std::stoi(val) != 0;
        } else if (key == "aug_seed") {
            cfg.aug_seed = std::stoull(val);
        } else {
            throw IoError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return config_from_text(os.str());
}

std::string config_hash(const PipelineConfig& cfg) {
    return hex64(fnv1a64(config_to_text(cfg)));
}

namespace {

ChannelStack select_planes(const ChannelStack& full, const PipelineConfig& cfg) {
    ChannelStack out;
    for (std::size_t i = 0; i < full.size(); ++i) {
        const std::string& n = full.names[i];
        const bool keep =
            (cfg.use_gray && n == "gray") ||
            (cfg.use_yuv && n.rfind("yuv.", 0) == 0) ||
            (cfg.use_hsv && n.rfind("hsv.", 0) == 0) ||
            (cfg.use_orig && (n.rfind("rgb.", 0) == 0 || n.rfind("orig.", 0) == 0));
        if (keep) out.push(n, full.planes[i]);
    }
    if (out.empty()) throw Error("configuration selects no color planes");
    return out;
}

}  // namespace

PatternRecord extract(const RasterImage& img, const PipelineConfig& cfg,
                      const std::string& source_name, ExtractArtifacts* artifacts) {
    const auto t0 = std::chrono::steady_clock::now();
    PatternRecord rec;
    rec.source = source_name;
    rec.config_hash = config_hash(cfg);

    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw PipelineError(name, e.what());
        }
    };

    const ChannelStack stack = stage("expand", [&] {
        return select_planes(expand_color_spaces(img), cfg);
    });
    const ChannelStack filtered = stage("filter", [&] {
        FilterBankConfig bank;
        bank.laplacian = cfg.filt_laplacian;
        bank.sobel = cfg.filt_sobel;
        bank.gabor = cfg.filt_gabor;
        bank.sources.clear();
        for (const std::string& s : cfg.filter_sources)
            if (stack.find(s) >= 0) bank.sources.push_back(s);
        return apply_filter_bank(stack, bank);
    });
    const Plane fused = stage("fuse", [&] { return fuse_pca(filtered); });
    const Mask mask = stage("segment", [&] {
        return segment_kmeans(fused, cfg.kmeans_k, cfg.fg_rule);
    });
    const Mask skel = stage("skeleton", [&] {
        return prune_spurs(thin(mask), cfg.min_spur);
    });
    const Geometry geom = stage("geometry", [&] {
        return compute_geometry(skel, cfg.alpha);
    });
    const std::vector<Eigen::Vector2i> seeds =
        stage("seed", [&] { return seed_points(skel, geom); });
    const TraceResult traced = stage("trace", [&] {
        SearchConfig sc;
        sc.alpha = cfg.alpha;
        sc.max_steps = cfg.max_steps;
        return trace(skel, geom, seeds, sc);
    });
    rec.graph = stage("graph", [&] {
        return build_graph(traced.keypoints, img.width, img.height);
    });
    rec.features = compute_features(rec.graph);
    rec.geometry = geom;
    rec.stats = traced.stats;

    if (cfg.learn_weights) {
        rec.weights = stage("weights", [&] {
            return learn_weights(rec.graph, default_augment_set(rec.graph, cfg.aug_seed));
        });
    }
    if (artifacts) {
        artifacts->fused = fused;
        artifacts->mask = mask;
        artifacts->skeleton = skel;
    }
    rec.extract_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

PatternRecord extract_file(const std::string& image_path, const PipelineConfig& cfg,
                           ExtractArtifacts* artifacts) {
    const RasterImage img = load_image(image_path);
    PatternRecord rec = extract(img, cfg, image_path, artifacts);
    // default id: file stem
    std::string stem = image_path;
    const auto slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const auto dot = stem.rfind('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    rec.id = stem;
    return rec;
}

}  // namespace treekey
