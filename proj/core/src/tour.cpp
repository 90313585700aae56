#include "eax/tour.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <random>
#include <stdexcept>

namespace eax {

namespace {

std::vector<int> inverse_of(std::span<const Vertex> order) {
    const int n = static_cast<int>(order.size());
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        const Vertex v = order[i];
        if (v < 0 || v >= n || pos[v] != -1) {
            throw std::invalid_argument("tour order is not a permutation");
        }
        pos[v] = i;
    }
    return pos;
}

Length cycle_length(const Instance& inst, std::span<const Vertex> order) {
    Length len = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) len += inst.dist(order[i], order[i + 1]);
    return len + inst.dist(order.back(), order.front());
}

}  // namespace

Tour::Tour(const Instance& inst, std::vector<Vertex> order)
    : order_(std::move(order)), pos_(inverse_of(order_)) {
    if (size() != inst.dimension()) {
        throw std::invalid_argument("tour size does not match instance dimension");
    }
    length_ = cycle_length(inst, order_);
}

std::vector<EdgeKey> Tour::edges() const {
    std::vector<EdgeKey> out;
    out.reserve(order_.size());
    for (int i = 0; i < size(); ++i) out.emplace_back(order_[i], order_[(i + 1) % size()]);
    return out;
}

Tour Tour::reversed() const {
    Tour t;
    t.order_.reserve(order_.size());
    t.order_.push_back(order_.front());
    for (int i = size() - 1; i > 0; --i) t.order_.push_back(order_[i]);
    t.pos_.resize(order_.size());
    for (int i = 0; i < size(); ++i) t.pos_[t.order_[i]] = i;
    t.length_ = length_;
    return t;
}

bool Tour::same_edges(const Tour& other) const {
    if (other.size() != size()) return false;
    for (Vertex v = 0; v < size(); ++v) {
        if (!other.contains_edge(v, next(v))) return false;
    }
    return true;
}

Length tour_length(const Instance& inst, std::span<const Vertex> order) {
    if (static_cast<int>(order.size()) != inst.dimension()) {
        throw std::invalid_argument("tour size does not match instance dimension");
    }
    inverse_of(order);
    return cycle_length(inst, order);
}

namespace {

class ArrayTwoOpt {
public:
    ArrayTwoOpt(const Instance& inst, std::vector<Vertex>& order)
        : inst_(inst), order_(order), n_(static_cast<int>(order.size())), pos_(n_) {
        for (int i = 0; i < n_; ++i) pos_[order_[i]] = i;
    }

    Vertex succ(Vertex v) const { return order_[pos_[v] + 1 == n_ ? 0 : pos_[v] + 1]; }
    Vertex pred(Vertex v) const { return order_[pos_[v] == 0 ? n_ - 1 : pos_[v] - 1]; }

    void run(std::span<const Vertex> initial_queue) {
        std::deque<Vertex> queue(initial_queue.begin(), initial_queue.end());
        std::vector<char> queued(n_, 1);
        auto push = [&](Vertex v) {
            if (!queued[v]) {
                queued[v] = 1;
                queue.push_back(v);
            }
        };
        while (!queue.empty()) {
            const Vertex a = queue.front();
            queue.pop_front();
            queued[a] = 0;
            if (const auto move = find_improving(a)) {
                const auto [p, q, r, s] = *move;
                push(p);
                push(q);
                push(r);
                push(s);
            }
        }
    }

private:
    // Returns the four endpoints of an applied move, if any.
    std::optional<std::array<Vertex, 4>> find_improving(Vertex a) {
        for (int forward = 1; forward >= 0; --forward) {
            const Vertex a_next = forward ? succ(a) : pred(a);
            const Length d1 = inst_.dist(a, a_next);
            for (const Vertex c : inst_.neighbors(a)) {
                const Length dac = inst_.dist(a, c);
                if (dac >= d1) break;
                const Vertex c_next = forward ? succ(c) : pred(c);
                if (c == a_next || c_next == a) continue;
                const Length delta = dac + inst_.dist(a_next, c_next) - d1 - inst_.dist(c, c_next);
                if (delta < 0) {
                    if (forward) {
                        reverse(pos_[a_next], pos_[c]);
                    } else {
                        reverse(pos_[a], pos_[c_next]);
                    }
                    return std::array<Vertex, 4>{a, a_next, c, c_next};
                }
            }
        }
        return std::nullopt;
    }

    // Reverses the cyclic segment order[i..j] (forward), or its complement
    // when that is shorter; both give the same undirected cycle.
    void reverse(int i, int j) {
        int len = (j - i + n_) % n_ + 1;
        if (2 * len > n_) {
            const int ni = (j + 1) % n_;
            const int nj = (i - 1 + n_) % n_;
            i = ni;
            j = nj;
            len = n_ - len;
        }
        for (int k = 0; k < len / 2; ++k) {
            const Vertex vi = order_[i];
            const Vertex vj = order_[j];
            order_[i] = vj;
            pos_[vj] = i;
            order_[j] = vi;
            pos_[vi] = j;
            i = (i + 1) % n_;
            j = (j - 1 + n_) % n_;
        }
    }

    const Instance& inst_;
    std::vector<Vertex>& order_;
    int n_;
    std::vector<int> pos_;
};

}  // namespace

void two_opt(const Instance& inst, std::vector<Vertex>& order) {
    ArrayTwoOpt opt(inst, order);
    opt.run(order);
}

Tour greedy_2opt_init(const Instance& inst, std::uint64_t seed) {
    const int n = inst.dimension();
    std::mt19937_64 rng(seed);

    std::vector<Vertex> order;
    order.reserve(n);
    std::vector<char> visited(n, 0);
    // unvisited[] with index map for O(1) removal
    std::vector<Vertex> unvisited(n);
    std::vector<int> slot(n);
    for (int i = 0; i < n; ++i) unvisited[i] = slot[i] = i;
    auto visit = [&](Vertex v) {
        visited[v] = 1;
        order.push_back(v);
        const int s = slot[v];
        const Vertex last = unvisited.back();
        unvisited[s] = last;
        slot[last] = s;
        unvisited.pop_back();
    };

    visit(std::uniform_int_distribution<Vertex>(0, n - 1)(rng));
    while (static_cast<int>(order.size()) < n) {
        const Vertex cur = order.back();
        Vertex best = -1;
        for (const Vertex w : inst.neighbors(cur)) {
            if (!visited[w]) {
                best = w;
                break;
            }
        }
        if (best < 0) {
            Length best_d = 0;
            for (const Vertex w : unvisited) {
                const Length d = inst.dist(cur, w);
                if (best < 0 || d < best_d || (d == best_d && w < best)) {
                    best = w;
                    best_d = d;
                }
            }
        }
        visit(best);
    }

    std::vector<Vertex> queue = order;
    std::shuffle(queue.begin(), queue.end(), rng);
    ArrayTwoOpt opt(inst, order);
    opt.run(queue);
    return Tour(inst, std::move(order));
}

EdgePartition shared_and_distinct_edges(const Tour& a, const Tour& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tours have different dimensions");
    EdgePartition out;
    for (const auto& e : a.edges()) {
        (b.contains_edge(e) ? out.shared : out.only_a).push_back(e);
    }
    for (const auto& e : b.edges()) {
        if (!a.contains_edge(e)) out.only_b.push_back(e);
    }
    return out;
}

std::string format_tour(const Tour& tour) {
    std::string out;
    for (int i = 0; i < tour.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(tour.at(i) + 1);
    }
    return out;
}

std::vector<Vertex> parse_tour_line(std::string_view line) {
    std::vector<Vertex> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        Vertex id = 0;
        const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, id);
        if (ec != std::errc{} || ptr != line.data() + j || id < 1) {
            throw std::invalid_argument("bad tour entry `" + std::string(line.substr(i, j - i)) + "`");
        }
        out.push_back(id - 1);
        i = j;
    }
    return out;
}

}  // namespace eax
