#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace reperio {

// A T x H x W x 3 video tensor with values in [0,1], row-major.
struct Clip {
    std::size_t T = 0, H = 0, W = 0;
    double fps = 0.0;
    std::vector<double> data;  // [T][H][W][3]

    Clip() = default;
    Clip(std::size_t t, std::size_t h, std::size_t w, double frames_per_second)
        : T(t), H(h), W(w), fps(frames_per_second), data(t * h * w * 3, 0.0) {}

    double& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) {
        return data[((t * H + y) * W + x) * 3 + c];
    }
    double at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const {
        return data[((t * H + y) * W + x) * 3 + c];
    }

    void validate() const {
        if (T < 2 || H < 1 || W < 1) throw std::invalid_argument("Clip: bad dimensions");
        if (!(fps > 0.0)) throw std::invalid_argument("Clip: fps must be positive");
        if (data.size() != T * H * W * 3) throw std::invalid_argument("Clip: data size mismatch");
        for (double v : data) {
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw std::invalid_argument("Clip: value outside [0,1]");
        }
    }

    bool same_geometry(const Clip& other) const {
        return T == other.T && H == other.H && W == other.W;
    }
};

// Left-right flip (mirrors the W axis of every frame).
inline Clip mirror_horizontal(const Clip& in) {
    Clip out(in.T, in.H, in.W, in.fps);
    for (std::size_t t = 0; t < in.T; ++t)
        for (std::size_t y = 0; y < in.H; ++y)
            for (std::size_t x = 0; x < in.W; ++x)
                for (std::size_t c = 0; c < 3; ++c)
                    out.at(t, y, x, c) = in.at(t, y, in.W - 1 - x, c);
    return out;
}

}  // namespace reperio
