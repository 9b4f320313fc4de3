#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ramt::detail {

// Little-endian binary file IO. Throws std::runtime_error on short reads so
// truncated files fail loudly.

class BinWriter {
public:
    explicit BinWriter(const std::string& path)
        : out_(path, std::ios::binary), path_(path) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    }

    void bytes(const void* p, size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
        if (!out_) throw std::runtime_error("write failed: " + path_);
    }

    void magic(std::string_view m) { bytes(m.data(), m.size()); }

    template <typename T>
    void scalar(T v) {
        static_assert(std::is_arithmetic_v<T>);
        if constexpr (std::endian::native == std::endian::big) {
            auto raw = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
            std::reverse(raw.begin(), raw.end());
            bytes(raw.data(), sizeof(T));
        } else {
            bytes(&v, sizeof(T));
        }
    }

    void u8(uint8_t v) { scalar(v); }
    void u32(uint32_t v) { scalar(v); }
    void u64(uint64_t v) { scalar(v); }
    void i32(int32_t v) { scalar(v); }
    void f32(float v) { scalar(v); }

    void cstring(std::string_view s) {
        bytes(s.data(), s.size());
        const char zero = 0;
        bytes(&zero, 1);
    }

    template <typename T>
    void array(const std::vector<T>& v) {
        u64(v.size());
        for (const T& x : v) scalar(x);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path)
        : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw std::runtime_error("cannot open for reading: " + path);
    }

    void bytes(void* p, size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in_.gcount()) != n)
            throw std::runtime_error("truncated file: " + path_);
    }

    void expect_magic(std::string_view m) {
        std::string got(m.size(), '\0');
        bytes(got.data(), got.size());
        if (got != m)
            throw std::runtime_error("bad magic in " + path_ + " (expected '" +
                                     std::string(m) + "')");
    }

    template <typename T>
    T scalar() {
        static_assert(std::is_arithmetic_v<T>);
        std::array<unsigned char, sizeof(T)> raw;
        bytes(raw.data(), sizeof(T));
        if constexpr (std::endian::native == std::endian::big)
            std::reverse(raw.begin(), raw.end());
        return std::bit_cast<T>(raw);
    }

    uint8_t u8() { return scalar<uint8_t>(); }
    uint32_t u32() { return scalar<uint32_t>(); }
    uint64_t u64() { return scalar<uint64_t>(); }
    int32_t i32() { return scalar<int32_t>(); }
    float f32() { return scalar<float>(); }

    std::string cstring() {
        std::string s;
        char c;
        for (;;) {
            bytes(&c, 1);
            if (c == 0) break;
            s.push_back(c);
        }
        return s;
    }

    template <typename T>
    std::vector<T> array(uint64_t sanity_max = UINT64_MAX) {
        const uint64_t n = u64();
        if (n > sanity_max)
            throw std::runtime_error("corrupt array length in " + path_);
        std::vector<T> v;
        v.reserve(n);
        for (uint64_t i = 0; i < n; ++i) v.push_back(scalar<T>());
        return v;
    }

private:
    std::ifstream in_;
    std::string path_;
};

}  // namespace ramt::detail
