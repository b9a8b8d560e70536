/*
 * Copyright 2026 The clid Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLID_SERIALIZE_HPP
#define CLID_SERIALIZE_HPP

#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "clid/errors.hpp"
#include "clid/matrix.hpp"

namespace clid::io {

inline constexpr char kMagic[4] = {'C', 'L', 'I', 'D'};
inline constexpr std::uint16_t kFormatVersion = 1;

// Payload kind stored after the magic header.
enum class Kind : std::uint16_t {
    Clusters = 1,
    Vae = 2,
    Lda = 3,
    Pipeline = 4,
    Classifier = 5,
};

class Writer {
  public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(Kind kind) {
        out_.write(kMagic, 4);
        u16(kFormatVersion);
        u16(static_cast<std::uint16_t>(kind));
    }

    void u8(std::uint8_t v) { out_.write(reinterpret_cast<const char*>(&v), 1); }
    void u16(std::uint16_t v) { out_.write(reinterpret_cast<const char*>(&v), 2); }
    void u64(std::uint64_t v) { out_.write(reinterpret_cast<const char*>(&v), 8); }
    void i64(std::int64_t v) { out_.write(reinterpret_cast<const char*>(&v), 8); }
    void f64(double v) { out_.write(reinterpret_cast<const char*>(&v), 8); }

    void str(const std::string& s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    void vec(const std::vector<double>& v) {
        u64(v.size());
        out_.write(reinterpret_cast<const char*>(v.data()),
                   static_cast<std::streamsize>(v.size() * sizeof(double)));
    }

    void mat(const Matrix& m) {
        u64(m.rows());
        u64(m.cols());
        out_.write(reinterpret_cast<const char*>(m.data()),
                   static_cast<std::streamsize>(m.vec().size() * sizeof(double)));
    }

  private:
    std::ostream& out_;
};

class Reader {
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    Kind header() {
        char magic[4];
        in_.read(magic, 4);
        if (!in_ || std::memcmp(magic, kMagic, 4) != 0)
            throw DataError("not a clid model file (bad magic)");
        const std::uint16_t version = u16();
        if (version != kFormatVersion)
            throw DataError("unsupported model format version " + std::to_string(version));
        return static_cast<Kind>(u16());
    }

    std::uint8_t u8() { return read_pod<std::uint8_t>(); }
    std::uint16_t u16() { return read_pod<std::uint16_t>(); }
    std::uint64_t u64() { return read_pod<std::uint64_t>(); }
    std::int64_t i64() { return read_pod<std::int64_t>(); }
    double f64() { return read_pod<double>(); }

    std::string str() {
        const std::uint64_t n = u64();
        std::string s(n, '\0');
        in_.read(s.data(), static_cast<std::streamsize>(n));
        check();
        return s;
    }

    std::vector<double> vec() {
        const std::uint64_t n = u64();
        std::vector<double> v(n);
        in_.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(n * sizeof(double)));
        check();
        return v;
    }

    Matrix mat() {
        const std::uint64_t rows = u64();
        const std::uint64_t cols = u64();
        Matrix m(rows, cols);
        in_.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(rows * cols * sizeof(double)));
        check();
        return m;
    }

  private:
    template <typename T>
    T read_pod() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        check();
        return v;
    }

    void check() {
        if (!in_) throw DataError("truncated model file");
    }

    std::istream& in_;
};

}  // namespace clid::io

#endif  // CLID_SERIALIZE_HPP
