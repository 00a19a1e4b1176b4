#pragma once

#include "orbitlab/matrix.hpp"

namespace orbitlab {

/// Ordered tuple of n x n matrices over one field; the basic carrier for
/// simultaneous-conjugation actions and for algebra generators.
struct MatrixTuple {
    std::vector<Matrix> entries;
    bool sl_constraint = false;  // acting group SL_n instead of GL_n

    static MatrixTuple make(std::vector<Matrix> entries, bool sl = false) {
        MatrixTuple t;
        t.entries = std::move(entries);
        t.sl_constraint = sl;
        for (const Matrix& m : t.entries) {
            if (!m.is_square()) throw domain_error("tuple entries must be square");
            if (m.rows() != t.entries[0].rows()) throw domain_error("tuple entries must share dimension");
            if (m.spec() != t.entries[0].spec()) throw domain_error("tuple entries must share field");
        }
        return t;
    }

    bool empty() const { return entries.empty(); }
    size_t size() const { return entries.size(); }

    int dim() const {
        if (entries.empty()) throw domain_error("empty tuple has no dimension");
        return entries[0].rows();
    }

    const FieldSpec& spec() const {
        if (entries.empty()) throw domain_error("empty tuple has no field");
        return entries[0].spec();
    }

    MatrixTuple conjugated(const Matrix& g) const {
        auto gi = invert(g);
        if (!gi) throw domain_error("conjugation by singular matrix");
        std::vector<Matrix> out;
        out.reserve(entries.size());
        for (const Matrix& m : entries) out.push_back(g * m * *gi);
        return make(std::move(out), sl_constraint);
    }

    static MatrixTuple concat(const MatrixTuple& a, const MatrixTuple& b) {
        if (a.dim() != b.dim() || a.spec() != b.spec()) throw domain_error("tuple concat mismatch");
        std::vector<Matrix> out = a.entries;
        out.insert(out.end(), b.entries.begin(), b.entries.end());
        return make(std::move(out), a.sl_constraint || b.sl_constraint);
    }

    MatrixTuple embedded(const FieldSpec& target) const {
        std::vector<Matrix> out;
        out.reserve(entries.size());
        for (const Matrix& m : entries) out.push_back(embed_matrix(m, target));
        return make(std::move(out), sl_constraint);
    }

    bool operator==(const MatrixTuple& o) const {
        return entries == o.entries && sl_constraint == o.sl_constraint;
    }
    bool operator!=(const MatrixTuple& o) const { return !(*this == o); }
};

}  // namespace orbitlab
