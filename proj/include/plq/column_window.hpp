#pragma once

#include "plq/lattice_model.hpp"
#include "plq/mpo.hpp"

namespace plq {

/// A block of consecutive lattice columns treated as one chain of "rungs":
/// chain site y fuses the block's sites at height y (ascending x within the
/// fused index, first column most significant).
struct ColumnBlock {
    int lo = 0, hi = 0;  // inclusive column range

    int width() const { return hi - lo + 1; }
};

/// Per-height fused dimensions of a block.
std::vector<long> block_rung_dims(const LatticeModel& model, const ColumnBlock& block);

/// The window operator P = prod P_Z over the given terms, as an MPO on the
/// fused chain of (left | right); each rung's physical index is
/// (left rung) x (right rung). Terms are multiplied in vertical order and the
/// product recompressed after each factor.
struct ColumnWindowOperator {
    ColumnBlock left, right;
    MPO mpo;
    std::vector<long> left_dims, right_dims;  // per height
};

ColumnWindowOperator build_window(const LatticeModel& model, const ColumnBlock& left,
                                  const ColumnBlock& right,
                                  const std::vector<const ModelTerm*>& terms,
                                  double threshold = kMpoDefaultThreshold);

/// Window over two adjacent single columns (C, C+1) with every term inside
/// them, the P_{C,C+1} of the propagation recursion.
ColumnWindowOperator adjacent_window(const LatticeModel& model, int c,
                                     double threshold = kMpoDefaultThreshold);

/// Dense form of a window (row/col order = rung-major), for desk-scale checks.
Mat window_to_dense(const ColumnWindowOperator& w);

/// rho_{C+1} = tr_left(rho P): contracts a left-block operator against the
/// window and traces the left block. Result lives on the right block's chain.
MPO propagate(const MPO& rho, const ColumnWindowOperator& window,
              double threshold = kMpoDefaultThreshold);

/// Embeds an operator given on one column of a block into the block's fused
/// chain (identity on the other columns).
MPO embed_in_block(const LatticeModel& model, const ColumnBlock& block, int column,
                   const MPO& op);

/// Embeds a block-chain operator into a window chain, acting on the left or
/// right factor of each rung.
MPO embed_in_window(const ColumnWindowOperator& w, const MPO& block_op, bool left_side);

/// Dense operator of a column-range product of terms (desk scale only);
/// site order canonical.
LocalOperator window_dense_canonical(const LatticeModel& model, int c_lo, int c_hi);

/// Matrix of a LocalOperator permuted from canonical order to rung-major
/// order over the given columns-by-heights grid.
Mat rung_major_matrix(const LatticeModel& model, const LocalOperator& op, int c_lo, int c_hi);

}  // namespace plq
