#include "autotandem/dataset.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "autotandem/sha256.hpp"

namespace autotandem {

void LabeledDataset::append(const Matrix& xs, const Matrix& ys) {
    if (xs.rows() != ys.rows())
        throw std::invalid_argument("LabeledDataset::append: row count mismatch");
    if (x.rows() == 0 && y.rows() == 0) {
        x = xs;
        y = ys;
        return;
    }
    if (xs.cols() != x.cols() || ys.cols() != y.cols())
        throw std::invalid_argument("LabeledDataset::append: column mismatch");
    const Eigen::Index n = x.rows();
    x.conservativeResize(n + xs.rows(), Eigen::NoChange);
    y.conservativeResize(n + ys.rows(), Eigen::NoChange);
    x.bottomRows(xs.rows()) = xs;
    y.bottomRows(ys.rows()) = ys;
}

static void hash_matrix(Sha256& h, const Matrix& m) {
    const std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()),
                                   static_cast<std::uint64_t>(m.cols())};
    for (std::uint64_t d : dims) {
        std::uint8_t bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(d >> (8 * i));
        h.update(bytes, 8);
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
            std::uint8_t bytes[8];
            for (int i = 0; i < 8; ++i)
                bytes[i] = static_cast<std::uint8_t>(bits >> (8 * i));
            h.update(bytes, 8);
        }
}

std::string dataset_hash(const LabeledDataset& d) {
    Sha256 h;
    hash_matrix(h, d.x);
    hash_matrix(h, d.y);
    return h.hex_digest();
}

}  // namespace autotandem
