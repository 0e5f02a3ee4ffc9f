#pragma once

// Small deterministic writers for the CSV/JSON reports. All floating-point
// output goes through fmt17() so identical runs produce byte-identical files.

#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hml {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt17(std::complex<double> z) {
    return fmt17(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt17(std::abs(z.imag())) + "i";
}

// Flat JSON writer that preserves insertion order of fields.
class JsonWriter {
public:
    void field(const std::string& key, double v) { add(key, fmt17(v)); }
    void field(const std::string& key, int v) { add(key, std::to_string(v)); }
    void field(const std::string& key, long v) { add(key, std::to_string(v)); }
    void field(const std::string& key, std::size_t v) { add(key, std::to_string(v)); }
    void field(const std::string& key, bool v) { add(key, v ? "true" : "false"); }
    void field(const std::string& key, const std::string& v) { add(key, quote(v)); }
    void field(const std::string& key, const char* v) { add(key, quote(v)); }

    void field(const std::string& key, const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += fmt17(v[i]);
        }
        add(key, s + "]");
    }

    // Nested object, rendered inline.
    void object(const std::string& key, const JsonWriter& inner) { add(key, inner.str()); }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) s += ",";
            s += items_[i];
        }
        return s + "}";
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path);
        out << str() << "\n";
    }

private:
    static std::string quote(const std::string& v) {
        std::string s = "\"";
        for (char c : v) {
            if (c == '"' || c == '\\') s += '\\';
            s += c;
        }
        return s + "\"";
    }
    void add(const std::string& key, const std::string& rendered) {
        items_.push_back(quote(key) + ":" + rendered);
    }
    std::vector<std::string> items_;
};

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path);
    }
    // Config echo lines so each file records how it was produced.
    void comment(const std::string& line) { out_ << "# " << line << "\n"; }
    void header(const std::string& h) { out_ << h << "\n"; }
    void row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << fmt17(cells[i]);
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace hml
