#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "finray/image.hpp"

namespace finray {

// Rectification model: output pixel -> homography -> radial distortion ->
// bilinear sample of the raw frame.
struct UnwarpCalibration {
    std::array<double, 9> homography = {1, 0, 0, 0, 1, 0, 0, 0, 1}; // row-major
    double radial_k1 = 0.0;
    double radial_k2 = 0.0;
    int out_h = 0;
    int out_w = 0;

    static UnwarpCalibration identity(int h, int w);

    // config block: 9 homography reals row-major, k1, k2, H, W
    static UnwarpCalibration parse(const std::string& text);
    std::string serialize() const;
};

struct AugmentPolicy {
    bool flip_lr = false;
    double brightness_jitter = 0.0;
    double contrast_jitter = 0.0;
    bool geometric_allowed = true; // must stay false for regression data

    static AugmentPolicy null_policy();
    static AugmentPolicy classification_default();
    static AugmentPolicy regression_default();
};

// 3x3 homography helpers (row-major).
std::array<double, 9> homography_inverse(const std::array<double, 9>& m);
void homography_apply(const std::array<double, 9>& m, double x, double y, double& ox, double& oy);

// Radial model around the frame center, normalized by half the larger side.
void distort_point(double k1, double k2, int h, int w, double x, double y, double& dx, double& dy);
// Newton inversion of distort_point.
void undistort_point(double k1, double k2, int h, int w, double x, double y, double& ux,
                     double& uy);

TactileImage unwarp(const TactileImage& raw, const UnwarpCalibration& cal);

// Forward synthesis of a distorted/warped frame from a clean one; used to
// produce calibration fixtures.
TactileImage warp_synthetic(const TactileImage& img, const UnwarpCalibration& cal, int raw_h,
                            int raw_w);

TactileImage augment(const TactileImage& img, const AugmentPolicy& policy, std::uint64_t seed);

// Area downsample to (h, w), channel planes concatenated row-major.
std::vector<double> raw_pixel_features(const TactileImage& img, int h, int w);

// Per-column standardization fit on the training split only.
class FeatureStandardizer {
public:
    void fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> transform(const std::vector<double>& row) const;
    bool fitted() const { return !mean_.empty(); }

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& stddev() const { return std_; }
    void set(std::vector<double> mean, std::vector<double> stddev);

private:
    std::vector<double> mean_;
    std::vector<double> std_;
};

} // namespace finray
