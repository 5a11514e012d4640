#include "stackr/poly.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <stdexcept>

namespace stackr::poly {

namespace {

using Clock = std::chrono::steady_clock;

int ceil_log2(int x) {
    int r = 0, p = 1;
    while (p < x) {
        p <<= 1;
        ++r;
    }
    return r;
}

// Mutable working board: bottom-first stacks so push/pop at the accessible
// end are O(1), a position index per object, and an action recorder. Every
// move is legality-checked, so the recorded sequence is valid by
// construction.
class Board {
public:
    Board(const Arrangement& a, const Geometry& g, int max_id) : geom_(g) {
        stacks_.resize(g.num_stacks);
        pos_stack_.assign(max_id + 1, 0);
        pos_index_.assign(max_id + 1, -1);
        for (int s = 1; s <= g.num_stacks; ++s) {
            const auto& src = a.stack(s);
            auto& dst = stacks_[s - 1];
            dst.assign(src.rbegin(), src.rend());
            for (int i = 0; i < static_cast<int>(dst.size()); ++i) {
                pos_stack_[dst[i]] = s;
                pos_index_[dst[i]] = i;
            }
        }
    }

    const Geometry& geometry() const { return geom_; }
    int height(int s) const { return static_cast<int>(stacks_[s - 1].size()); }
    int free_slots(int s) const { return geom_.depth - height(s); }
    bool full(int s) const { return height(s) == geom_.depth; }
    bool empty(int s) const { return stacks_[s - 1].empty(); }
    ObjectId top(int s) const { return stacks_[s - 1].back(); }
    int stack_of(ObjectId o) const { return pos_stack_[o]; }
    int depth_of(ObjectId o) const {
        return height(pos_stack_[o]) - pos_index_[o];
    }
    ObjectId at_depth(int s, int depth) const {
        return stacks_[s - 1][height(s) - depth];
    }

    void move(int from, int to) {
        if (from == to || stacks_[from - 1].empty() || full(to))
            throw std::logic_error("solver emitted an impermissible move (" +
                                   std::to_string(from) + " -> " +
                                   std::to_string(to) + ")");
        ObjectId o = stacks_[from - 1].back();
        stacks_[from - 1].pop_back();
        stacks_[to - 1].push_back(o);
        pos_stack_[o] = to;
        pos_index_[o] = static_cast<int>(stacks_[to - 1].size()) - 1;
        actions_.push_back(Action{from, to});
    }

    const std::vector<Action>& actions() const { return actions_; }

    Arrangement to_arrangement() const {
        Arrangement out(geom_.num_stacks);
        for (int s = 1; s <= geom_.num_stacks; ++s) {
            auto& dst = out.mutable_stack(s);
            const auto& src = stacks_[s - 1];
            dst.assign(src.rbegin(), src.rend());
        }
        return out;
    }

private:
    Geometry geom_;
    std::vector<std::vector<ObjectId>> stacks_;  // bottom-first
    std::vector<int> pos_stack_, pos_index_;
    std::vector<Action> actions_;
};

void require_buffer_empty(const Arrangement& a, const Geometry& g,
                          const char* which) {
    if (!a.stack(g.buffer_stack()).empty())
        throw std::invalid_argument(std::string("poly: buffer stack ") +
                                    std::to_string(g.buffer_stack()) +
                                    " must be empty in the " + which + " state");
}

Solution finish(Board& board, Clock::time_point started) {
    Solution sol;
    sol.actions = board.actions();
    sol.cost = static_cast<int>(sol.actions.size());
    sol.stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    return sol;
}

// ---------------------------------------------------------------------------
// Poly-D: per target stack, fill goal slots deepest-first, O(d) actions per
// placement. Junk dug out along the way scatters into free working slots
// (preferring each object's own goal stack, where it may settle for good) or
// parks in the buffer; after every landing, follow-up goal objects that
// surfaced on some top chain-land for one action each.
//
// Two junk policies share the machinery. The optimistic one parks junk in
// the buffer across placements, which keeps the landing zone clear and lets
// most of a stack's residents chain-land straight out of the buffer; on
// boards tight enough that a parked object blocks a mandatory move it bails
// out with Board's impermissible-move error. The conservative policy drains
// the buffer within every placement with count-based shuffles that restore
// everything they touch; its feasibility only needs the buffer's d free
// slots, so it covers every instance. The solver runs optimistic first and
// falls back. Worst case stays O(d) per placement either way.
// ---------------------------------------------------------------------------
class PolyD {
public:
    PolyD(const Instance& inst, Board& board, bool optimistic)
        : inst_(inst),
          board_(board),
          optimistic_(optimistic),
          w_(inst.geometry.working_stacks()),
          d_(inst.geometry.depth),
          buf_(inst.geometry.buffer_stack()),
          finalized_count_(w_ + 1, 0),
          finalized_(inst.n + 1, 0),
          goal_from_bottom_(w_ + 1),
          goal_stack_of_(inst.n + 1, 0) {
        for (int s = 1; s <= w_; ++s) {
            const auto& g = inst.goal.stack(s);
            goal_from_bottom_[s].assign(g.rbegin(), g.rend());
            for (ObjectId o : g) goal_stack_of_[o] = s;
        }
    }

    void run() {
        for (int c = 1; c <= w_; ++c) {
            if (optimistic_) drain_buffer(c);
            const auto& goal = inst_.goal.stack(c);  // top-first
            for (int q = static_cast<int>(goal.size()) - 1; q >= 0; --q) {
                next_ = q > 0 ? goal[q - 1] : 0;
                place(goal[q], c);
            }
        }
        if (!board_.empty(buf_))
            throw std::logic_error("junk left in the buffer after all placements");
    }

private:
    int junk(int c) const { return board_.height(c) - finalized_count_[c]; }

    long long supply(int avoid1, int avoid2) const {
        long long total = 0;
        for (int s = 1; s <= w_; ++s)
            if (s != avoid1 && s != avoid2) total += board_.free_slots(s);
        return total;
    }

    // Scatter target for junk object q among the working stacks: its own
    // goal stack when that one is unprocessed and has room (the later dig
    // gets shorter, and the arrival may extend that stack's finished block),
    // otherwise the roomiest stack so scattered junk stays shallow.
    int dest_for(ObjectId q, int c, int other) const {
        const int gq = goal_stack_of_[q];
        if (gq > c && gq != other && !board_.full(gq)) return gq;
        int best = 0, best_free = 0;
        for (int s = 1; s <= w_; ++s) {
            if (s == c || s == other || board_.full(s)) continue;
            if (board_.free_slots(s) > best_free) {
                best = s;
                best_free = board_.free_slots(s);
            }
        }
        return best;
    }

    bool evacuate_top(int from, int c, int other) {
        const ObjectId q = board_.top(from);
        const int dest = dest_for(q, c, other);
        if (dest == 0) return false;
        board_.move(from, dest);
        maybe_finalize_in_place(q, dest);
        return true;
    }

    void maybe_finalize_in_place(ObjectId q, int s) {
        if (finalized_[q] || s > w_) return;
        const int f = finalized_count_[s];
        if (f < static_cast<int>(goal_from_bottom_[s].size()) &&
            goal_from_bottom_[s][f] == q && board_.height(s) == f + 1) {
            finalized_[q] = 1;
            ++finalized_count_[s];
        }
    }

    void finalize(ObjectId o, int c) {
        assert(board_.stack_of(o) == c);
        assert(board_.depth_of(o) == junk(c));
        finalized_[o] = 1;
        ++finalized_count_[c];
    }

    // Chain-land follow-up goal objects sitting accessible on any top (often
    // the buffer, right where staging put them) while the zone stays clear.
    void land_ready(int c) {
        while (junk(c) == 0) {
            const int f = finalized_count_[c];
            if (f >= static_cast<int>(goal_from_bottom_[c].size())) return;
            const ObjectId nxt = goal_from_bottom_[c][f];
            const int s = board_.stack_of(nxt);
            if (s == c || board_.top(s) != nxt) return;
            board_.move(s, c);
            finalize(nxt, c);
        }
    }

    // Returning a buffered junk object: send it home instead of back to
    // `fallback` when its goal stack is still unprocessed and has room.
    void return_from_buffer(int c, int fallback, int avoid = 0) {
        const ObjectId q = board_.top(buf_);
        const int gq = goal_stack_of_[q];
        if (gq > c && gq != fallback && gq != avoid && !board_.full(gq)) {
            board_.move(buf_, gq);
            maybe_finalize_in_place(q, gq);
        } else {
            board_.move(buf_, fallback);
        }
    }

    // Where returning junk goes once c is full again: `prefer`, then any
    // working stack with a free slot; one always exists while the buffer
    // holds objects, since the working stacks can hold all n.
    int spill_target(int c, int prefer, int avoid = 0) {
        if (!board_.full(c)) return c;
        if (prefer != 0 && prefer != avoid && !board_.full(prefer)) return prefer;
        for (int s = 1; s <= w_; ++s)
            if (s != c && s != avoid && !board_.full(s)) return s;
        return 0;
    }

    // Clears the junk above c's landing zone: scattered into free working
    // slots while they last, buffered otherwise. While the next goal object
    // is still buried here, the last working slot is held back for it so it
    // ends on a top where the chain landing can grab it.
    void stage_junk(int c, int other) {
        bool awaiting =
            next_ != 0 && !finalized_[next_] && board_.stack_of(next_) == c;
        while (junk(c) > 0) {
            const ObjectId q = board_.top(c);
            if (q == next_) {
                if (evacuate_top(c, c, other)) {
                    awaiting = false;
                    continue;
                }
            } else if (!awaiting || supply(c, other) > 1) {
                if (evacuate_top(c, c, other)) continue;
            }
            board_.move(c, buf_);
        }
    }

    void place(ObjectId o, int c) {
        if (finalized_[o]) return;
        const int x = board_.stack_of(o);
        if (x == c && board_.depth_of(o) == junk(c)) {
            finalize(o, c);
            land_ready(c);
            return;
        }
        if (x == c)
            place_within(o, c);
        else if (x == buf_)
            place_from_buffer(o, c);
        else
            place_across(o, c, x);
    }

    // Land o, chain-land whatever surfaced, and drain the buffer unless the
    // optimistic policy keeps it parked. Chains may consume buffered objects
    // themselves, so the drain runs on the buffer height.
    void land_and_return(ObjectId o, int c, int from, int prefer) {
        assert(board_.top(from) == o);
        board_.move(from, c);
        finalize(o, c);
        land_ready(c);
        if (optimistic_) return;
        while (!board_.empty(buf_)) {
            return_from_buffer(c, spill_target(c, prefer));
            land_ready(c);
        }
    }

    // Start-of-stack flush of parked junk: goal objects of c land directly
    // as they surface, the rest scatters home or onto a working stack.
    void drain_buffer(int c) {
        while (!board_.empty(buf_)) {
            land_ready(c);
            if (board_.empty(buf_)) return;
            const ObjectId q = board_.top(buf_);
            int dest = dest_for(q, 0, 0);
            if (dest == 0) dest = c;  // has room whenever nothing else does
            board_.move(buf_, dest);
            maybe_finalize_in_place(q, dest);
        }
    }

    void place_across(ObjectId o, int c, int x) {
        // Blockers above o: scatter while the working stacks have room,
        // then cycle the rest through the buffer while o parks on c for a
        // moment. Returning blockers divert home when they can.
        while (board_.top(x) != o && evacuate_top(x, c, x)) {
        }
        if (const int y = board_.depth_of(o); y > 1) {
            const bool evac_c = board_.full(c);
            if (evac_c) board_.move(c, buf_);
            for (int i = 0; i < y - 1; ++i) board_.move(x, buf_);
            board_.move(x, c);
            for (int i = 0; i < y - 1; ++i) return_from_buffer(c, x);
            board_.move(c, x);
            if (evac_c) board_.move(buf_, c);
        }
        stage_junk(c, x);
        land_and_return(o, c, x, x);
    }

    // o is parked in the buffer under other junk: surface it (junk above
    // scatters, or piles onto c and is re-staged), then land it.
    void place_from_buffer(ObjectId o, int c) {
        while (board_.top(buf_) != o) {
            const ObjectId q = board_.top(buf_);
            int dest = dest_for(q, c, 0);
            if (dest == 0) dest = c;  // has room whenever nothing else does
            board_.move(buf_, dest);
            maybe_finalize_in_place(q, dest);
        }
        if (junk(c) == 0) {
            board_.move(buf_, c);
            finalize(o, c);
            land_ready(c);
            return;
        }
        const int park = dest_for(o, c, 0);
        if (park == 0) {
            // Ride on top of c, then run the borrowed-top shuffle below.
            board_.move(buf_, c);
            place_within(o, c);
            return;
        }
        board_.move(buf_, park);
        stage_junk(c, park);
        land_and_return(o, c, park, park);
    }

    void place_within(ObjectId o, int c) {
        // Blockers above o scatter while the working stacks have room.
        while (board_.top(c) != o && evacuate_top(c, c, 0)) {
        }
        if (board_.top(c) == o) {
            const int park = dest_for(o, c, 0);
            if (park != 0) {
                board_.move(c, park);
                stage_junk(c, park);
                land_and_return(o, c, park, park);
                return;
            }
        }
        // No room anywhere: route everything through the buffer, borrowing
        // the top of one other stack as the parking slot for o. This path
        // restores everything it touches.
        const int y = board_.depth_of(o);
        const int j = junk(c);
        int helper = 0;
        for (int s = 1; s <= w_ && helper == 0; ++s)
            if (s != c && !board_.full(s)) helper = s;
        if (helper == 0) helper = c == 1 ? 2 : 1;
        const bool evac = board_.full(helper);
        if (evac) board_.move(helper, buf_);
        for (int i = 0; i < y - 1; ++i) board_.move(c, buf_);
        assert(board_.top(c) == o);
        board_.move(c, helper);  // o parks on top
        for (int i = 0; i < j - y; ++i) board_.move(c, buf_);
        board_.move(helper, c);  // o onto the finalized block
        finalize(o, c);
        for (int i = 0; i < j - 1; ++i)
            return_from_buffer(c, c, evac ? helper : 0);
        if (evac) board_.move(buf_, helper);
        land_ready(c);
    }

    const Instance& inst_;
    Board& board_;
    bool optimistic_;
    int w_, d_, buf_;
    ObjectId next_ = 0;  // the object placed right after the current one
    std::vector<int> finalized_count_;
    std::vector<char> finalized_;
    std::vector<std::vector<ObjectId>> goal_from_bottom_;
    std::vector<int> goal_stack_of_;
};

// ---------------------------------------------------------------------------
// Recursive halving sort of one stack. The block of the top `len` objects of
// the target holds desired ranks [lo, lo+len): split it into a top and a deep
// half via the two scratch stacks, recurse on the top half, stash it, recurse
// on the exposed deep half, unstash. The scratch invariant free(h) >=
// ceil(len/2), free(b) >= floor(len/2) is kept by splitting stashes.
// ---------------------------------------------------------------------------
class StackSorter {
public:
    StackSorter(Board& board, int target, int helper, int buffer,
                const std::vector<ObjectId>& desired, const std::vector<int>& rank)
        : board_(board), t_(target), h_(helper), b_(buffer),
          k_(static_cast<int>(desired.size())), rank_(rank) {}

    void run() {
        const int effective = k_ - settled_suffix(0, k_);
        if (effective <= 1) return;
        const int need_h = (effective + 1) / 2;
        const int premoved = std::max(0, need_h - board_.free_slots(h_));
        for (int i = 0; i < premoved; ++i) board_.move(h_, b_);
        sort_block(0, k_);
        for (int i = 0; i < premoved; ++i) board_.move(b_, h_);
    }

private:
    // Ranks found at depths offset+1.. matching lo, lo+1, ...
    bool sorted_at(int offset, int lo, int len) const {
        for (int i = 1; i <= len; ++i)
            if (rank_[board_.at_depth(t_, offset + i)] != lo + i - 1) return false;
        return true;
    }

    // Longest bottom-aligned run of the block that is already in order.
    int settled_suffix(int lo, int len) const {
        int s = 0;
        while (s < len &&
               rank_[board_.at_depth(t_, len - s)] == lo + len - s - 1)
            ++s;
        return s;
    }

    void sort_block(int lo, int len) {
        len -= settled_suffix(lo, len);
        if (len <= 1) return;
        const int m1 = (len + 1) / 2, m2 = len - m1;
        for (int i = 0; i < len; ++i)
            board_.move(t_, rank_[board_.top(t_)] < lo + m1 ? h_ : b_);
        for (int i = 0; i < m2; ++i) board_.move(b_, t_);
        for (int i = 0; i < m1; ++i) board_.move(h_, t_);
        sort_block(lo, m1);
        if (!sorted_at(m1, lo + m1, m2)) {
            int stash_b = std::clamp(board_.free_slots(b_) - m2 / 2, 0, m1);
            int stash_h = m1 - stash_b;
            for (int i = 0; i < stash_b; ++i) board_.move(t_, b_);
            for (int i = 0; i < stash_h; ++i) board_.move(t_, h_);
            sort_block(lo + m1, m2);
            for (int i = 0; i < stash_h; ++i) board_.move(h_, t_);
            for (int i = 0; i < stash_b; ++i) board_.move(b_, t_);
        }
    }

    Board& board_;
    int t_, h_, b_, k_;
    const std::vector<int>& rank_;
};

// ---------------------------------------------------------------------------
// Column solver: recursively split the stack window, label objects by which
// half their goal stack lies in, reorder each stack into two contiguous
// blocks, consolidate stacks pairwise until every stack is pure, then swap
// whole stacks onto the correct side of the window.
// ---------------------------------------------------------------------------
class ClsrEngine {
public:
    ClsrEngine(Board& board, std::vector<int> goal_stack, int w, int buf)
        : board_(board),
          goal_stack_(std::move(goal_stack)),
          left_(goal_stack_.size(), 0),
          w_(w),
          d_(board.geometry().depth),
          buf_(buf) {}

    void run() { recurse(1, w_); }

    void one_pass() {
        if (w_ >= 2) pass(1, w_, (1 + w_) / 2);
    }

private:
    void recurse(int l, int r) {
        if (l >= r) return;
        const int m = (l + r) / 2;
        pass(l, r, m);
        recurse(l, m);
        recurse(m + 1, r);
    }

    int left_count(int s) const {
        int cnt = 0;
        for (int y = 1; y <= board_.height(s); ++y)
            cnt += left_[board_.at_depth(s, y)];
        return cnt;
    }

    bool is_pure(int s) const {
        const int cnt = left_count(s);
        return cnt == 0 || cnt == board_.height(s);
    }

    // Consecutive same-label objects from the top.
    int top_run(int s, bool left) const {
        int run = 0;
        for (int y = 1; y <= board_.height(s); ++y) {
            if ((left_[board_.at_depth(s, y)] != 0) != left) break;
            ++run;
        }
        return run;
    }

    bool blocked(int s, bool left_on_top) const {
        // Already two contiguous blocks with the wanted block on top?
        int flips = 0;
        for (int y = 2; y <= board_.height(s); ++y)
            flips += left_[board_.at_depth(s, y)] != left_[board_.at_depth(s, y - 1)];
        if (flips != 1) return flips == 0;
        return (left_[board_.at_depth(s, 1)] != 0) == left_on_top;
    }

    int nearest_helper(int l, int r, int s) const {
        int best = 0, best_key = 1 << 30;
        for (int cand = l; cand <= r; ++cand) {
            if (cand == s) continue;
            const int dist = std::abs(cand - s);
            const int key = dist * 2 + (board_.empty(cand) ? 1 : 0) * (1 << 20);
            if (key < best_key) {
                best_key = key;
                best = cand;
            }
        }
        return best;
    }

    void reorder(int l, int r, int s, bool left_on_top) {
        const int h_s = board_.height(s);
        const int lt = left_count(s);
        if (lt == 0 || lt == h_s) return;
        if (blocked(s, left_on_top)) return;
        const int top_cnt = left_on_top ? lt : h_s - lt;
        const int helper = nearest_helper(l, r, s);
        const int parks = std::max(0, top_cnt - board_.free_slots(helper));
        for (int i = 0; i < parks; ++i) board_.move(helper, buf_);
        for (int i = 0; i < h_s; ++i) {
            const bool is_left = left_[board_.top(s)] != 0;
            board_.move(s, is_left == left_on_top ? helper : buf_);
        }
        for (int i = 0; i < h_s - top_cnt; ++i) board_.move(buf_, s);
        for (int i = 0; i < top_cnt; ++i) board_.move(helper, s);
        for (int i = 0; i < parks; ++i) board_.move(buf_, helper);
    }

    void pass(int l, int r, int m) {
        for (int s = l; s <= r; ++s)
            for (int y = 1; y <= board_.height(s); ++y) {
                const ObjectId o = board_.at_depth(s, y);
                assert(goal_stack_[o] >= l && goal_stack_[o] <= r);
                left_[o] = goal_stack_[o] <= m ? 1 : 0;
            }

        // Stacks are reordered into two contiguous blocks lazily, right
        // before each consolidation touches them, which picks the needed
        // block orientation in one go.
        consolidate(l, r);
        merge_partials(l, r, /*left=*/true);
        merge_partials(l, r, /*left=*/false);
        place_sides(l, r, m);
    }

    std::vector<int> mixed_stacks(int l, int r) const {
        std::vector<int> out;
        for (int s = l; s <= r; ++s)
            if (!is_pure(s)) out.push_back(s);
        return out;
    }

    void consolidate(int l, int r) {
        while (true) {
            std::vector<int> mixed = mixed_stacks(l, r);
            if (mixed.empty()) return;
            if (mixed.size() == 1) {
                split_singleton(l, r, mixed[0]);
                return;
            }
            int i = mixed[0], j = mixed[1];
            const int li0 = left_count(i), lj0 = left_count(j);
            const int ri0 = board_.height(i) - li0, rj0 = board_.height(j) - lj0;
            if (li0 + lj0 >= d_) {
                // One of the two can be filled with left objects; pick the
                // role split that needs fewer reorders.
                if (reorder_work(i, false) + reorder_work(j, true) >
                    reorder_work(j, false) + reorder_work(i, true))
                    std::swap(i, j);
                const int li = left_count(i);
                const int ri = board_.height(i) - li;
                reorder(l, r, i, /*left_on_top=*/false);
                if (top_run(j, true) < d_ - li) reorder(l, r, j, /*left_on_top=*/true);
                for (int t = 0; t < ri; ++t) board_.move(i, buf_);
                for (int t = 0; t < d_ - li; ++t) board_.move(j, i);
                drain_buffer(l, r, ri, /*left=*/false, j);
            } else if (ri0 + rj0 >= d_) {
                if (reorder_work(i, true) + reorder_work(j, false) >
                    reorder_work(j, true) + reorder_work(i, false))
                    std::swap(i, j);
                const int li = left_count(i);
                const int ri = board_.height(i) - li;
                reorder(l, r, i, /*left_on_top=*/true);
                if (top_run(j, false) < d_ - ri)
                    reorder(l, r, j, /*left_on_top=*/false);
                for (int t = 0; t < li; ++t) board_.move(i, buf_);
                for (int t = 0; t < d_ - ri; ++t) board_.move(j, i);
                drain_buffer(l, r, li, /*left=*/true, j);
            } else {
                // Both sides fit whole: gather lefts in one, rights in the
                // other, again preferring the cheaper orientation split.
                if (reorder_work(i, false) + reorder_work(j, true) >
                    reorder_work(j, false) + reorder_work(i, true))
                    std::swap(i, j);
                const int ri = board_.height(i) - left_count(i);
                const int lj = left_count(j);
                reorder(l, r, i, /*left_on_top=*/false);
                if (top_run(j, true) < lj) reorder(l, r, j, /*left_on_top=*/true);
                for (int t = 0; t < ri; ++t) board_.move(i, buf_);
                for (int t = 0; t < lj; ++t) board_.move(j, i);
                for (int t = 0; t < ri; ++t) board_.move(buf_, j);
            }
        }
    }

    // Rough action count reorder() would spend to orient s.
    int reorder_work(int s, bool left_on_top) const {
        const int h_s = board_.height(s);
        const int lt = left_count(s);
        if (lt == 0 || lt == h_s) return 0;
        if (blocked(s, left_on_top)) return 0;
        return 2 * h_s;
    }

    // Returns `count` displaced one-side objects from the buffer, preferring
    // pure same-side or empty stacks so the fallback stack keeps its two
    // contiguous blocks; `fallback` has guaranteed room for the remainder.
    void drain_buffer(int l, int r, int count, bool left, int fallback) {
        for (int t = 0; t < count; ++t) {
            int dest = fallback;
            for (int cand = l; cand <= r; ++cand) {
                if (cand == fallback || board_.full(cand)) continue;
                const int lc = left_count(cand);
                const bool empty = board_.empty(cand);
                const bool pure_side =
                    !empty && (left ? lc == board_.height(cand) : lc == 0);
                if (empty || pure_side) {
                    dest = cand;
                    break;
                }
            }
            board_.move(buf_, dest);
        }
    }

    // One mixed stack left: pour one of its blocks into compatible pure or
    // empty stacks. A valid goal always leaves room on at least one side.
    void split_singleton(int l, int r, int s) {
        const int li = left_count(s), ri = board_.height(s) - li;
        long long room_right = 0, room_left = 0;
        for (int t = l; t <= r; ++t) {
            if (t == s) continue;
            if (board_.empty(t)) {
                room_right += d_;
                room_left += d_;
            } else if (left_count(t) == 0) {
                room_right += board_.free_slots(t);
            } else if (left_count(t) == board_.height(t)) {
                room_left += board_.free_slots(t);
            }
        }
        const bool move_right = room_right >= ri;
        assert(move_right || room_left >= li);
        reorder(l, r, s, /*left_on_top=*/!move_right);
        const int count = move_right ? ri : li;
        for (int t = 0; t < count; ++t) {
            int dest = 0;
            for (int cand = l; cand <= r && dest == 0; ++cand) {
                if (cand == s || board_.full(cand)) continue;
                if (board_.empty(cand)) {
                    dest = cand;
                } else {
                    const int lc = left_count(cand);
                    const bool pure_right = lc == 0;
                    const bool pure_left = lc == board_.height(cand);
                    if (move_right ? pure_right : pure_left) dest = cand;
                }
            }
            assert(dest != 0);
            board_.move(s, dest);
        }
    }

    // At most one non-full stack per side may remain, otherwise the side can
    // need more window slots than it has.
    void merge_partials(int l, int r, bool left) {
        while (true) {
            std::vector<int> partial;
            for (int s = l; s <= r; ++s) {
                if (board_.empty(s) || board_.full(s)) continue;
                const int lc = left_count(s);
                if (left ? lc == board_.height(s) : lc == 0) partial.push_back(s);
            }
            if (partial.size() < 2) return;
            const int a = partial[0], b = partial[1];
            const int t = std::min(board_.free_slots(a), board_.height(b));
            for (int i = 0; i < t; ++i) board_.move(b, a);
        }
    }

    void place_sides(int l, int r, int m) {
        std::vector<int> mis_left, mis_right;
        for (int s = l; s <= r; ++s) {
            if (board_.empty(s)) continue;
            const bool is_left = left_count(s) == board_.height(s);
            assert(is_left || left_count(s) == 0);
            if (is_left && s > m) mis_left.push_back(s);
            if (!is_left && s <= m) mis_right.push_back(s);
        }
        const size_t pairs = std::min(mis_left.size(), mis_right.size());
        for (size_t p = 0; p < pairs; ++p) {
            const int a = mis_left[p], b = mis_right[p];
            const int ha = board_.height(a), hb = board_.height(b);
            for (int i = 0; i < ha; ++i) board_.move(a, buf_);
            for (int i = 0; i < hb; ++i) board_.move(b, a);
            for (int i = 0; i < ha; ++i) board_.move(buf_, b);
        }
        auto drain_into_empty = [&](int s, int lo, int hi) {
            int dest = 0;
            for (int cand = lo; cand <= hi && dest == 0; ++cand)
                if (board_.empty(cand)) dest = cand;
            assert(dest != 0);
            const int h = board_.height(s);
            for (int i = 0; i < h; ++i) board_.move(s, dest);
        };
        for (size_t p = pairs; p < mis_left.size(); ++p)
            drain_into_empty(mis_left[p], l, m);
        for (size_t p = pairs; p < mis_right.size(); ++p)
            drain_into_empty(mis_right[p], m + 1, r);
    }

    Board& board_;
    std::vector<int> goal_stack_;
    std::vector<char> left_;
    int w_, d_, buf_;
};

std::vector<int> column_goals(const Instance& inst) {
    std::vector<int> goal_stack(static_cast<size_t>(inst.n) + 1, 0);
    for (int s = 1; s <= inst.goal.num_stacks(); ++s)
        for (ObjectId o : inst.goal.stack(s)) goal_stack[o] = s;
    for (int o = 1; o <= inst.n; ++o)
        if (goal_stack[o] > inst.geometry.working_stacks())
            throw std::invalid_argument(
                "poly: goal places object " + std::to_string(o) +
                " on the buffer stack; the column solver keeps it empty");
    return goal_stack;
}

void run_clsr(Board& board, const Instance& inst) {
    ClsrEngine engine(board, column_goals(inst), inst.geometry.working_stacks(),
                      inst.geometry.buffer_stack());
    engine.run();
    for (int s = 1; s <= inst.goal.num_stacks(); ++s)
        for (ObjectId o : inst.goal.stack(s))
            if (board.stack_of(o) != s)
                throw std::logic_error("column solver left object " +
                                       std::to_string(o) + " outside its goal stack");
}

void run_sort_phase(Board& board, const Instance& inst) {
    const int w = inst.geometry.working_stacks();
    std::vector<int> rank(static_cast<size_t>(inst.n) + 1, 0);
    for (int c = 1; c <= w; ++c) {
        const auto& desired = inst.goal.stack(c);
        if (desired.empty()) continue;
        for (int i = 0; i < static_cast<int>(desired.size()); ++i)
            rank[desired[i]] = i;
        StackSorter(board, c, c == w ? w - 1 : c + 1,
                    inst.geometry.buffer_stack(), desired, rank)
            .run();
    }
}

}  // namespace

long long poly_d_cost_bound(int w, int d) {
    return static_cast<long long>(w) * d * (4LL * d + 6);
}

long long sort_stack_cost_bound(int d) {
    return 4LL * d * ceil_log2(std::max(d, 2)) + 2;
}

long long poly_clsr_cost_bound(int w, int d) {
    return 24LL * w * d * ceil_log2(std::max(w, 2)) + 24;
}

long long poly_lsr_cost_bound(int w, int d) {
    return poly_clsr_cost_bound(w, d) +
           static_cast<long long>(w) * sort_stack_cost_bound(d);
}

Solution poly_d_solve(const Instance& inst) {
    const auto started = Clock::now();
    validate_instance(inst);
    if (inst.kind != Kind::Labeled)
        throw std::invalid_argument("poly_d_solve: labeled instances only");
    require_buffer_empty(inst.start, inst.geometry, "start");
    require_buffer_empty(inst.goal, inst.geometry, "goal");

    try {
        Board board(inst.start, inst.geometry, inst.n);
        PolyD(inst, board, /*optimistic=*/true).run();
        if (!(board.to_arrangement() == inst.goal))
            throw std::logic_error("optimistic run missed the goal");
        return finish(board, started);
    } catch (const std::logic_error&) {
        // A parked object blocked a mandatory move; redo with the policy
        // that keeps the buffer clear inside every placement.
    }
    Board board(inst.start, inst.geometry, inst.n);
    PolyD(inst, board, /*optimistic=*/false).run();
    if (!(board.to_arrangement() == inst.goal))
        throw std::logic_error("poly_d_solve did not reach the goal arrangement");
    return finish(board, started);
}

std::vector<Action> sort_stack(const Arrangement& pi, const Geometry& g,
                               int target_stack, int helper_stack,
                               int buffer_stack,
                               const std::vector<ObjectId>& desired_order) {
    validate_geometry(g);
    for (int s : {target_stack, helper_stack, buffer_stack})
        if (s < 1 || s > g.num_stacks)
            throw std::invalid_argument("sort_stack: stack index " +
                                        std::to_string(s) + " out of range");
    if (target_stack == helper_stack || target_stack == buffer_stack ||
        helper_stack == buffer_stack)
        throw std::invalid_argument("sort_stack: the three stacks must be distinct");
    if (!pi.stack(buffer_stack).empty())
        throw std::invalid_argument("sort_stack: buffer stack " +
                                    std::to_string(buffer_stack) + " is not empty");
    std::vector<ObjectId> have = pi.stack(target_stack);
    std::vector<ObjectId> want = desired_order;
    std::sort(have.begin(), have.end());
    std::sort(want.begin(), want.end());
    if (have != want)
        throw std::invalid_argument(
            "sort_stack: desired_order is not a permutation of the target stack");

    int max_id = 0;
    for (int s = 1; s <= pi.num_stacks(); ++s)
        for (ObjectId o : pi.stack(s)) max_id = std::max(max_id, o);
    std::vector<int> rank(static_cast<size_t>(max_id) + 1, 0);
    for (int i = 0; i < static_cast<int>(desired_order.size()); ++i)
        rank[desired_order[i]] = i;

    Board board(pi, g, max_id);
    StackSorter(board, target_stack, helper_stack, buffer_stack, desired_order,
                rank)
        .run();
    return board.actions();
}

Solution poly_clsr_solve(const Instance& inst) {
    const auto started = Clock::now();
    validate_instance(inst);
    require_buffer_empty(inst.start, inst.geometry, "start");
    Board board(inst.start, inst.geometry, inst.n);
    run_clsr(board, inst);
    return finish(board, started);
}

Solution poly_lsr_solve(const Instance& inst) {
    const auto started = Clock::now();
    validate_instance(inst);
    if (inst.kind != Kind::Labeled)
        throw std::invalid_argument("poly_lsr_solve: labeled instances only");
    require_buffer_empty(inst.start, inst.geometry, "start");
    require_buffer_empty(inst.goal, inst.geometry, "goal");

    Board board(inst.start, inst.geometry, inst.n);
    run_clsr(board, inst);
    run_sort_phase(board, inst);
    if (!(board.to_arrangement() == inst.goal))
        throw std::logic_error("poly_lsr_solve did not reach the goal arrangement");
    return finish(board, started);
}

Arrangement clsr_first_pass(const Instance& inst) {
    validate_instance(inst);
    require_buffer_empty(inst.start, inst.geometry, "start");
    Board board(inst.start, inst.geometry, inst.n);
    ClsrEngine engine(board, column_goals(inst), inst.geometry.working_stacks(),
                      inst.geometry.buffer_stack());
    engine.one_pass();
    return board.to_arrangement();
}

}  // namespace stackr::poly
