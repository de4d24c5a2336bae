#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <type_traits>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace reperio {

enum class Dtype : std::uint8_t { f32 = 0, f64 = 1 };

// Dense n-dimensional row-major array. All in-memory math runs in double;
// Dtype only selects the on-disk payload width.
struct TensorF {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    TensorF() = default;
    explicit TensorF(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(numel_of(shape), 0.0);
    }
    TensorF(std::vector<std::size_t> s, std::vector<double> d)
        : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != numel_of(shape))
            throw std::invalid_argument("TensorF: shape/data size mismatch");
    }

    static std::size_t numel_of(const std::vector<std::size_t>& s) {
        return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
    }

    std::size_t numel() const { return data.size(); }

    void check_finite(const std::string& label) const {
        for (double v : data) {
            if (!std::isfinite(v)) throw std::runtime_error("non-finite value in tensor " + label);
        }
    }
};

namespace detail {

// Byte-order-independent little-endian serialization via value shifts.
template <typename T>
    requires std::is_unsigned_v<T>
void write_le(std::ostream& os, T value) {
    unsigned char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
    requires std::is_unsigned_v<T>
T read_le(std::istream& is, const char* what) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw std::runtime_error(std::string("rptf: truncated ") + what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
}

inline void write_le_f32(std::ostream& os, float value) {
    std::uint32_t raw;
    std::memcpy(&raw, &value, sizeof(raw));
    write_le(os, raw);
}

inline void write_le_f64(std::ostream& os, double value) {
    std::uint64_t raw;
    std::memcpy(&raw, &value, sizeof(raw));
    write_le(os, raw);
}

inline float read_le_f32(std::istream& is, const char* what) {
    const std::uint32_t raw = read_le<std::uint32_t>(is, what);
    float value;
    std::memcpy(&value, &raw, sizeof(value));
    return value;
}

inline double read_le_f64(std::istream& is, const char* what) {
    const std::uint64_t raw = read_le<std::uint64_t>(is, what);
    double value;
    std::memcpy(&value, &raw, sizeof(value));
    return value;
}

}  // namespace detail

// .rptf layout: "RPTF", u32 version=1, u8 dtype (0=f32, 1=f64), u8 ndim,
// ndim x u64 dims, row-major payload. Everything little-endian.
inline void write_tensor(const std::filesystem::path& path, const TensorF& t,
                         Dtype dtype = Dtype::f64) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("rptf: cannot open for writing: " + path.string());
    os.write("RPTF", 4);
    detail::write_le<std::uint32_t>(os, 1);
    detail::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(dtype));
    if (t.shape.size() > 255) throw std::invalid_argument("rptf: too many dimensions");
    detail::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(t.shape.size()));
    for (std::size_t d : t.shape) detail::write_le<std::uint64_t>(os, d);
    for (double v : t.data) {
        if (dtype == Dtype::f32) {
            detail::write_le_f32(os, static_cast<float>(v));
        } else {
            detail::write_le_f64(os, v);
        }
    }
    if (!os) throw std::runtime_error("rptf: write failed: " + path.string());
}

inline TensorF read_tensor(const std::filesystem::path& path, Dtype* dtype_out = nullptr) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("rptf: cannot open: " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "RPTF", 4) != 0)
        throw std::runtime_error("rptf: bad magic in " + path.string());
    const auto version = detail::read_le<std::uint32_t>(is, "version");
    if (version != 1) throw std::runtime_error("rptf: unsupported version");
    const auto dtype_raw = detail::read_le<std::uint8_t>(is, "dtype");
    if (dtype_raw > 1) throw std::runtime_error("rptf: bad dtype");
    const auto ndim = detail::read_le<std::uint8_t>(is, "ndim");
    std::vector<std::size_t> shape(ndim);
    for (auto& d : shape) {
        d = static_cast<std::size_t>(detail::read_le<std::uint64_t>(is, "dims"));
    }
    const std::size_t n = TensorF::numel_of(shape);
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (dtype_raw == 0) {
            data[i] = static_cast<double>(detail::read_le_f32(is, "payload short"));
        } else {
            data[i] = detail::read_le_f64(is, "payload short");
        }
    }
    if (is.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("rptf: trailing bytes in " + path.string());
    if (dtype_out) *dtype_out = static_cast<Dtype>(dtype_raw);
    return TensorF(std::move(shape), std::move(data));
}

}  // namespace reperio
