/*
 * SPDX-License-Identifier: Apache-2.0
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
#ifndef MARLIN_TENSOR_HPP
#define MARLIN_TENSOR_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace marlin {

/// Dense 4-D array indexed (k, m, j, n) = (user, slot, base station, subcarrier).
///
/// Storage puts k fastest so that the per-cell user vectors touched by the
/// solver inner loop are contiguous; the on-disk layout (k slowest) is handled
/// by the binary dump routines in channel.cpp.
template <typename Scalar>
class Tensor4 {
public:
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    Tensor4() : k_(0), m_(0), j_(0), n_(0) {}

    Tensor4(Eigen::Index users, Eigen::Index slots, Eigen::Index stations, Eigen::Index subcarriers)
        : k_(users), m_(slots), j_(stations), n_(subcarriers) {
        if (users < 0 || slots < 0 || stations < 0 || subcarriers < 0)
            throw std::invalid_argument("Tensor4: negative dimension");
        data_ = Array::Zero(users * slots * stations * subcarriers);
    }

    Eigen::Index users() const { return k_; }
    Eigen::Index slots() const { return m_; }
    Eigen::Index stations() const { return j_; }
    Eigen::Index subcarriers() const { return n_; }
    Eigen::Index size() const { return data_.size(); }

    Scalar& operator()(Eigen::Index k, Eigen::Index m, Eigen::Index j, Eigen::Index n) {
        return data_[offset(k, m, j, n)];
    }
    Scalar operator()(Eigen::Index k, Eigen::Index m, Eigen::Index j, Eigen::Index n) const {
        return data_[offset(k, m, j, n)];
    }

    /// Start of the contiguous user-vector for cell (m, j, n).
    Eigen::Index cell_offset(Eigen::Index m, Eigen::Index j, Eigen::Index n) const {
        return ((m * j_ + j) * n_ + n) * k_;
    }

    /// Contiguous view over all K users at a fixed (m, j, n).
    auto cell(Eigen::Index m, Eigen::Index j, Eigen::Index n) {
        return data_.segment(cell_offset(m, j, n), k_);
    }
    auto cell(Eigen::Index m, Eigen::Index j, Eigen::Index n) const {
        return data_.segment(cell_offset(m, j, n), k_);
    }

    Array& flat() { return data_; }
    const Array& flat() const { return data_; }

    bool same_shape(const Tensor4& other) const {
        return k_ == other.k_ && m_ == other.m_ && j_ == other.j_ && n_ == other.n_;
    }

private:
    Eigen::Index offset(Eigen::Index k, Eigen::Index m, Eigen::Index j, Eigen::Index n) const {
        return ((m * j_ + j) * n_ + n) * k_ + k;
    }

    Eigen::Index k_, m_, j_, n_;
    Array data_;
};

using Tensor4d = Tensor4<double>;
using Tensor4u8 = Tensor4<std::uint8_t>;

}  // namespace marlin

#endif
