#include "finray/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finray/errors.hpp"
#include "finray/rng.hpp"

namespace finray {

UnwarpCalibration UnwarpCalibration::identity(int h, int w) {
    UnwarpCalibration cal;
    cal.out_h = h;
    cal.out_w = w;
    return cal;
}

UnwarpCalibration UnwarpCalibration::parse(const std::string& text) {
    std::istringstream in(text);
    UnwarpCalibration cal;
    for (double& v : cal.homography)
        if (!(in >> v)) throw DataError("calibration parse: expected 9 homography values");
    if (!(in >> cal.radial_k1 >> cal.radial_k2))
        throw DataError("calibration parse: expected k1 k2");
    if (!(in >> cal.out_h >> cal.out_w)) throw DataError("calibration parse: expected H W");
    return cal;
}

std::string UnwarpCalibration::serialize() const {
    std::ostringstream out;
    out.precision(17);
    for (int i = 0; i < 9; ++i) out << homography[i] << (i % 3 == 2 ? "\n" : " ");
    out << radial_k1 << " " << radial_k2 << "\n" << out_h << " " << out_w << "\n";
    return out.str();
}

AugmentPolicy AugmentPolicy::null_policy() { return {false, 0.0, 0.0, true}; }

AugmentPolicy AugmentPolicy::classification_default() { return {true, 0.05, 0.05, true}; }

AugmentPolicy AugmentPolicy::regression_default() { return {false, 0.02, 0.02, false}; }

std::array<double, 9> homography_inverse(const std::array<double, 9>& m) {
    const double a = m[0], b = m[1], c = m[2];
    const double d = m[3], e = m[4], f = m[5];
    const double g = m[6], h = m[7], i = m[8];
    const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    if (std::abs(det) <= 1e-9) throw InvalidArgument("homography_inverse: singular matrix");
    const double inv = 1.0 / det;
    return {(e * i - f * h) * inv, (c * h - b * i) * inv, (b * f - c * e) * inv,
            (f * g - d * i) * inv, (a * i - c * g) * inv, (c * d - a * f) * inv,
            (d * h - e * g) * inv, (b * g - a * h) * inv, (a * e - b * d) * inv};
}

void homography_apply(const std::array<double, 9>& m, double x, double y, double& ox, double& oy) {
    const double u = m[0] * x + m[1] * y + m[2];
    const double v = m[3] * x + m[4] * y + m[5];
    const double w = m[6] * x + m[7] * y + m[8];
    if (w == 0.0) throw InvalidArgument("homography_apply: point at infinity");
    ox = u / w;
    oy = v / w;
}

namespace {

void center_scale(int h, int w, double& cx, double& cy, double& s) {
    cx = 0.5 * (w - 1);
    cy = 0.5 * (h - 1);
    s = std::max(cx, cy);
    if (s <= 0.0) s = 1.0;
}

double sample_bilinear(const TactileImage& img, double y, double x, int ch) {
    if (y < 0 || x < 0 || y > img.h - 1 || x > img.w - 1) return 0.0;
    int y0 = static_cast<int>(std::floor(y)), x0 = static_cast<int>(std::floor(x));
    int y1 = std::min(y0 + 1, img.h - 1), x1 = std::min(x0 + 1, img.w - 1);
    double ty = y - y0, tx = x - x0;
    double v0 = img.at(y0, x0, ch) + (img.at(y0, x1, ch) - img.at(y0, x0, ch)) * tx;
    double v1 = img.at(y1, x0, ch) + (img.at(y1, x1, ch) - img.at(y1, x0, ch)) * tx;
    return v0 + (v1 - v0) * ty;
}

} // namespace

void distort_point(double k1, double k2, int h, int w, double x, double y, double& dx,
                   double& dy) {
    double cx, cy, s;
    center_scale(h, w, cx, cy, s);
    const double xn = (x - cx) / s, yn = (y - cy) / s;
    const double r2 = xn * xn + yn * yn;
    const double f = 1.0 + k1 * r2 + k2 * r2 * r2;
    dx = xn * f * s + cx;
    dy = yn * f * s + cy;
}

void undistort_point(double k1, double k2, int h, int w, double x, double y, double& ux,
                     double& uy) {
    double cx, cy, s;
    center_scale(h, w, cx, cy, s);
    const double xd = (x - cx) / s, yd = (y - cy) / s;
    // fixed-point/Newton iteration on the radius
    double xn = xd, yn = yd;
    for (int it = 0; it < 20; ++it) {
        const double r2 = xn * xn + yn * yn;
        const double f = 1.0 + k1 * r2 + k2 * r2 * r2;
        xn = xd / f;
        yn = yd / f;
    }
    ux = xn * s + cx;
    uy = yn * s + cy;
}

TactileImage unwarp(const TactileImage& raw, const UnwarpCalibration& cal) {
    if (cal.out_h < 1 || cal.out_w < 1) throw InvalidArgument("unwarp: bad output size");
    homography_inverse(cal.homography); // singularity check
    TactileImage out(cal.out_h, cal.out_w);
    for (int r = 0; r < cal.out_h; ++r) {
        for (int c = 0; c < cal.out_w; ++c) {
            double hx, hy;
            homography_apply(cal.homography, c, r, hx, hy);
            double sx, sy;
            distort_point(cal.radial_k1, cal.radial_k2, raw.h, raw.w, hx, hy, sx, sy);
            for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = sample_bilinear(raw, sy, sx, ch);
        }
    }
    out.meta = raw.meta;
    return out;
}

TactileImage warp_synthetic(const TactileImage& img, const UnwarpCalibration& cal, int raw_h,
                            int raw_w) {
    const std::array<double, 9> hinv = homography_inverse(cal.homography);
    TactileImage raw(raw_h, raw_w);
    for (int r = 0; r < raw_h; ++r) {
        for (int c = 0; c < raw_w; ++c) {
            double ux, uy;
            undistort_point(cal.radial_k1, cal.radial_k2, raw_h, raw_w, c, r, ux, uy);
            double sx, sy;
            homography_apply(hinv, ux, uy, sx, sy);
            for (int ch = 0; ch < 3; ++ch) raw.at(r, c, ch) = sample_bilinear(img, sy, sx, ch);
        }
    }
    return raw;
}

TactileImage augment(const TactileImage& img, const AugmentPolicy& policy, std::uint64_t seed) {
    if (policy.brightness_jitter < 0.0 || policy.contrast_jitter < 0.0)
        throw InvalidArgument("augment: jitter magnitudes must be nonnegative");
    Rng rng(seed);
    TactileImage out = img;
    if (policy.flip_lr && policy.geometric_allowed && rng.bernoulli(0.5)) out = flip_lr(out);
    double contrast = 1.0, brightness = 0.0;
    if (policy.contrast_jitter > 0.0)
        contrast = 1.0 + rng.uniform(-policy.contrast_jitter, policy.contrast_jitter);
    if (policy.brightness_jitter > 0.0)
        brightness = rng.uniform(-policy.brightness_jitter, policy.brightness_jitter);
    if (contrast != 1.0 || brightness != 0.0) {
        for (double& v : out.px)
            v = std::clamp((v - 0.5) * contrast + 0.5 + brightness, 0.0, 1.0);
    }
    return out;
}

std::vector<double> raw_pixel_features(const TactileImage& img, int h, int w) {
    if (h < 4 || w < 4) throw InvalidArgument("raw_pixel_features: downsample size must be >= 4");
    TactileImage small = downsample_area(img, h, w);
    std::vector<double> feat(static_cast<std::size_t>(h) * w * 3);
    std::size_t idx = 0;
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) feat[idx++] = small.at(r, c, ch);
    return feat;
}

void FeatureStandardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidArgument("FeatureStandardizer::fit: empty training matrix");
    const std::size_t dim = rows[0].size();
    mean_.assign(dim, 0.0);
    std_.assign(dim, 0.0);
    for (const auto& r : rows) {
        if (r.size() != dim)
            throw ShapeError("FeatureStandardizer::fit: ragged rows (" + std::to_string(r.size()) +
                             " vs " + std::to_string(dim) + ")");
        for (std::size_t j = 0; j < dim; ++j) mean_[j] += r[j];
    }
    for (double& m : mean_) m /= static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = r[j] - mean_[j];
            std_[j] += d * d;
        }
    for (double& s : std_) s = std::sqrt(s / static_cast<double>(rows.size()));
}

std::vector<double> FeatureStandardizer::transform(const std::vector<double>& row) const {
    if (row.size() != mean_.size())
        throw ShapeError("FeatureStandardizer::transform: dimension mismatch (" +
                         std::to_string(row.size()) + " vs " + std::to_string(mean_.size()) + ")");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        out[j] = (row[j] - mean_[j]) / std::max(std_[j], 1e-8);
    return out;
}

void FeatureStandardizer::set(std::vector<double> mean, std::vector<double> stddev) {
    if (mean.size() != stddev.size())
        throw ShapeError("FeatureStandardizer::set: mean/std size mismatch");
    mean_ = std::move(mean);
    std_ = std::move(stddev);
}

} // namespace finray
