// Copyright 2026 The tcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tcq/blossom.h"

#include <algorithm>
#include <stdexcept>

namespace tcq {

namespace {

// Array layout follows the classic formulation: vertices are 0..n-1,
// non-trivial blossoms n..2n-1. Edge k has endpoints 2k and 2k+1; endpoint p
// refers to vertex endpoint_[p], and p ^ 1 is the other end of the same edge.
// Vertex duals are stored doubled so integer weights stay integral.
class Solver {
public:
    Solver(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : n_(n), edges_(edges), max_cardinality_(max_cardinality) {}

    BlossomResult run();

private:
    int64_t slack(int k) const {
        const WeightedEdge& e = edges_[k];
        return dual_[e.u] + dual_[e.v] - 2 * e.weight;
    }

    static int wrap(int j, size_t size) {
        const int s = static_cast<int>(size);
        return ((j % s) + s) % s;
    }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) {
            leaves(t, out);
        }
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_;
    const std::vector<WeightedEdge>& edges_;
    bool max_cardinality_;

    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> childs_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> endps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<bool> has_bestedges_;
    std::vector<int> unused_;
    std::vector<int64_t> dual_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

void Solver::assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else if (t == 2) {
        const int base = blossombase_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

// Traces back from v and w towards the roots. Returns the base of a new
// blossom, or -1 if the two paths reach different roots (augmenting path).
int Solver::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void Solver::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unused_.back();
    unused_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int>& path = childs_[b];
    std::vector<int>& endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    for (int leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }
    // Cheapest edge from the new blossom to each neighbouring S-blossom.
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[sub]) {
            for (int leaf : leaves(sub)) {
                std::vector<int> list;
                for (int p : neighbend_[leaf]) {
                    list.push_back(p / 2);
                }
                nblists.push_back(std::move(list));
            }
        } else {
            nblists.push_back(blossombestedges_[sub]);
        }
        for (const auto& list : nblists) {
            for (int kk : list) {
                int i = edges_[kk].u;
                int j = edges_[kk].v;
                if (inblossom_[j] == b) {
                    std::swap(i, j);
                }
                const int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 &&
                    (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
        }
        blossombestedges_[sub].clear();
        has_bestedges_[sub] = false;
        bestedge_[sub] = -1;
    }
    blossombestedges_[b].clear();
    for (int kk : bestedgeto) {
        if (kk != -1) {
            blossombestedges_[b].push_back(kk);
        }
    }
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int kk : blossombestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
}

void Solver::expand_blossom(int b, bool endstage) {
    for (int s : childs_[b]) {
        blossomparent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (int leaf : leaves(s)) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        // Relabel the even-length path from the entry child to the base.
        const std::vector<int>& childs = childs_[b];
        const std::vector<int>& endps = endps_[b];
        const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) -
                                 childs.begin());
        int jstep = 0;
        int endptrick = 0;
        if (j & 1) {
            j -= static_cast<int>(childs.size());
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[endps[wrap(j - endptrick, endps.size())] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[endps[wrap(j - endptrick, endps.size())] / 2] = true;
            j += jstep;
            p = endps[wrap(j - endptrick, endps.size())] ^ endptrick;
            allowedge_[p / 2] = true;
            j += jstep;
        }
        int bv = childs[wrap(j, childs.size())];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (childs[wrap(j, childs.size())] != entrychild) {
            bv = childs[wrap(j, childs.size())];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int labelled = -1;
            for (int leaf : leaves(bv)) {
                if (label_[leaf] != 0) {
                    labelled = leaf;
                    break;
                }
            }
            if (labelled != -1) {
                label_[labelled] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                assign_label(labelled, 2, labelend_[labelled]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

// Swaps matched and unmatched edges along the path through blossom b from
// vertex v to the base, making v the new base.
void Solver::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) {
        t = blossomparent_[t];
    }
    if (t >= n_) {
        augment_blossom(t, v);
    }
    std::vector<int>& childs = childs_[b];
    std::vector<int>& endps = endps_[b];
    const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep = 0;
    int endptrick = 0;
    if (i & 1) {
        j -= static_cast<int>(childs.size());
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = childs[wrap(j, childs.size())];
        const int p = endps[wrap(j - endptrick, endps.size())] ^ endptrick;
        if (t >= n_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = childs[wrap(j, childs.size())];
        if (t >= n_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
}

void Solver::augment_matching(int k) {
    const int v = edges_[k].u;
    const int w = edges_[k].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
        while (true) {
            const int bs = inblossom_[s];
            if (bs >= n_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            const int t = endpoint_[labelend_[bs]];
            const int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            const int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

BlossomResult Solver::run() {
    const int nedge = static_cast<int>(edges_.size());
    BlossomResult result;
    result.mate.assign(n_, -1);
    result.reduced_cost.assign(edges_.size(), 0);
    if (nedge == 0 || n_ == 0) {
        return result;
    }
    int64_t maxweight = 0;
    for (const WeightedEdge& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_ || e.u == e.v) {
            throw std::invalid_argument("blossom: bad edge endpoints");
        }
        maxweight = std::max(maxweight, e.weight);
    }
    endpoint_.resize(2 * nedge);
    neighbend_.assign(n_, {});
    for (int k = 0; k < nedge; ++k) {
        endpoint_[2 * k] = edges_[k].u;
        endpoint_[2 * k + 1] = edges_[k].v;
        neighbend_[edges_[k].u].push_back(2 * k + 1);
        neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v) {
        inblossom_[v] = v;
    }
    blossomparent_.assign(2 * n_, -1);
    childs_.assign(2 * n_, {});
    endps_.assign(2 * n_, {});
    blossombase_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) {
        blossombase_[v] = v;
    }
    bestedge_.assign(2 * n_, -1);
    blossombestedges_.assign(2 * n_, {});
    has_bestedges_.assign(2 * n_, false);
    unused_.clear();
    for (int b = n_; b < 2 * n_; ++b) {
        unused_.push_back(b);
    }
    dual_.assign(2 * n_, 0);
    for (int v = 0; v < n_; ++v) {
        dual_[v] = maxweight;
    }
    allowedge_.assign(nedge, false);

    for (int stage = 0; stage < n_; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; ++b) {
            blossombestedges_[b].clear();
            has_bestedges_[b] = false;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), false);
        queue_.clear();
        for (int v = 0; v < n_; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    const int k = p / 2;
                    const int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = true;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            const int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        const int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }

            // No augmenting path under the current duals; pick the largest
            // dual step that keeps every constraint satisfied.
            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!max_cardinality_) {
                deltatype = 1;
                delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
            }
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    const int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; ++b) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    const int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                // Only reachable with max_cardinality: nothing left to grow.
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
            }
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 1) {
                    dual_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dual_[v] += delta;
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dual_[b] += delta;
                    } else if (label_[b] == 2) {
                        dual_[b] -= delta;
                    }
                }
            }
            if (deltatype == 1) {
                break;
            }
            if (deltatype == 2) {
                allowedge_[deltaedge] = true;
                int i = edges_[deltaedge].u;
                if (label_[inblossom_[i]] == 0) {
                    i = edges_[deltaedge].v;
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = true;
                queue_.push_back(edges_[deltaedge].u);
            } else if (deltatype == 4) {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int b = n_; b < 2 * n_; ++b) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
                dual_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }

    for (int v = 0; v < n_; ++v) {
        if (mate_[v] >= 0) {
            result.mate[v] = endpoint_[mate_[v]];
        }
    }
    for (int k = 0; k < nedge; ++k) {
        int64_t s = slack(k);
        // Add the duals of blossoms containing both endpoints.
        std::vector<int> ib{edges_[k].u};
        std::vector<int> jb{edges_[k].v};
        while (blossomparent_[ib.back()] != -1) {
            ib.push_back(blossomparent_[ib.back()]);
        }
        while (blossomparent_[jb.back()] != -1) {
            jb.push_back(blossomparent_[jb.back()]);
        }
        auto bi = ib.rbegin();
        auto bj = jb.rbegin();
        for (; bi != ib.rend() && bj != jb.rend() && *bi == *bj; ++bi, ++bj) {
            s += 2 * dual_[*bi];
        }
        result.reduced_cost[k] = s;
    }
    return result;
}

}  // namespace

BlossomResult max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                  bool max_cardinality) {
    if (num_vertices < 0) {
        throw std::invalid_argument("blossom: negative vertex count");
    }
    Solver solver(num_vertices, edges, max_cardinality);
    return solver.run();
}

}  // namespace tcq
