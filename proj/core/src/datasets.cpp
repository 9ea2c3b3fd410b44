#include "finray/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "finray/config.hpp"
#include "finray/errors.hpp"
#include "finray/png_io.hpp"
#include "finray/rng.hpp"

namespace fs = std::filesystem;

namespace finray {

namespace {

void prepare_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    if (ec) throw DataError("dataset generation: cannot create output dir " + out_dir);
    // probe writability up front so the failure names the directory
    const fs::path probe = fs::path(out_dir) / ".write_probe";
    FILE* f = std::fopen(probe.string().c_str(), "wb");
    if (!f) throw DataError("dataset generation: output dir not writable: " + out_dir);
    std::fclose(f);
    fs::remove(probe, ec);
}

std::string record_name(const char* prefix, const std::string& tag, int idx) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%s_%05d.png", prefix, tag.c_str(), idx);
    return buf;
}

} // namespace

DatasetManifest generate_classification_dataset(int n_per_class, std::uint64_t seed,
                                                const std::string& out_dir,
                                                const GenerateOptions& opts) {
    if (n_per_class < 1)
        throw InvalidArgument("generate_classification_dataset: n_per_class must be >= 1");
    prepare_out_dir(out_dir);

    FlatConfig gen;
    gen.set("kind", "classification");
    gen.set_int("n_per_class", n_per_class);
    gen.set_u64("seed", seed);
    gen.set_double("noise_std", opts.noise_std);
    gen.set_int("params_version", opts.params.version);

    DatasetManifest m;
    m.kind = DatasetKind::Classification;
    m.config_hash = gen.content_hash();

    std::int64_t id = 0;
    for (int cls = 0; cls < kNumNutClasses; ++cls) {
        const NutClass nut = static_cast<NutClass>(cls);
        for (int i = 0; i < n_per_class; ++i) {
            const std::uint64_t rec_seed = mix_seed(seed, static_cast<std::uint64_t>(cls), i);
            Rng rng(rec_seed);
            ContactState contact;
            contact.position_mm = rng.uniform(10.0, 50.0);
            contact.angle_deg = rng.uniform(0.0, 360.0);
            contact.force_n = rng.uniform(5.0, 25.0);
            contact.lateral_offset_mm = rng.uniform(-5.0, 5.0);
            const double size = opts.params.nut_size_mm[cls] * rng.uniform(0.95, 1.05);
            const IndenterSpec spec = IndenterSpec::nut_texture(nut, rng.next_u64(), size);

            TactileImage img = render(contact, spec, opts.noise_std, rng.next_u64(), opts.params);

            ManifestRecord rec;
            rec.id = id++;
            rec.path = "images/" + record_name("cls", nut_class_name(nut), i);
            rec.kind = DatasetKind::Classification;
            rec.class_label = cls;
            rec.seed = rec_seed;
            save_png(img, (fs::path(out_dir) / rec.path).string());
            if (opts.write_raw) {
                std::string raw = rec.path.substr(0, rec.path.size() - 4) + ".ftimg";
                save_ftimg(img, (fs::path(out_dir) / raw).string());
            }
            m.records.push_back(std::move(rec));
        }
    }
    save_manifest(m, (fs::path(out_dir) / "manifest.jsonl").string());
    return m;
}

DatasetManifest generate_regression_dataset(int n_per_indenter, std::uint64_t seed,
                                            const std::string& out_dir,
                                            const GenerateOptions& opts) {
    if (n_per_indenter < 1)
        throw InvalidArgument("generate_regression_dataset: n_per_indenter must be >= 1");
    prepare_out_dir(out_dir);

    FlatConfig gen;
    gen.set("kind", "regression");
    gen.set_int("n_per_indenter", n_per_indenter);
    gen.set_u64("seed", seed);
    gen.set_double("noise_std", opts.noise_std);
    gen.set_int("params_version", opts.params.version);

    DatasetManifest m;
    m.kind = DatasetKind::Regression;
    m.config_hash = gen.content_hash();

    // jittered grid over [10,50] mm x [0,25] N; aspect ~1.6 keeps cells
    // roughly square in normalized units
    const int gy = std::max(5, static_cast<int>(std::lround(std::sqrt(n_per_indenter / 1.6))));
    const int gx = (n_per_indenter + gy - 1) / gy;

    const IndenterSpec indenters[2] = {IndenterSpec::cylinder(10.0), IndenterSpec::cuboid(10.0)};
    const char* tags[2] = {"cylinder", "cuboid"};

    std::int64_t id = 0;
    for (int ind = 0; ind < 2; ++ind) {
        for (int i = 0; i < n_per_indenter; ++i) {
            const int cell_x = i % gx; // position axis
            const int cell_y = i / gx; // force axis
            const std::uint64_t rec_seed = mix_seed(seed, 100 + ind, i);
            Rng rng(rec_seed);
            ContactState contact;
            contact.position_mm = 10.0 + 40.0 * ((cell_x + rng.uniform()) / gx);
            contact.force_n = 25.0 * (((cell_y % gy) + rng.uniform()) / gy);
            contact.angle_deg = rng.uniform(-8.0, 8.0);
            contact.lateral_offset_mm = rng.uniform(-3.0, 3.0);

            TactileImage img =
                render(contact, indenters[ind], opts.noise_std, rng.next_u64(), opts.params);

            ManifestRecord rec;
            rec.id = id++;
            rec.path = "images/" + record_name("reg", tags[ind], i);
            rec.kind = DatasetKind::Regression;
            rec.position_mm = contact.position_mm;
            rec.force_n = contact.force_n;
            rec.seed = rec_seed;
            save_png(img, (fs::path(out_dir) / rec.path).string());
            if (opts.write_raw) {
                std::string raw = rec.path.substr(0, rec.path.size() - 4) + ".ftimg";
                save_ftimg(img, (fs::path(out_dir) / raw).string());
            }
            m.records.push_back(std::move(rec));
        }
    }
    save_manifest(m, (fs::path(out_dir) / "manifest.jsonl").string());
    return m;
}

} // namespace finray
