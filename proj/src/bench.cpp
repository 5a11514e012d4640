#include "stackr/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stackr/poly.hpp"
#include "stackr/search.hpp"

namespace stackr::bench {

std::string AlgoSpec::label() const {
    if (algo == "polyd") return "polyd";
    if (algo == "polylsr") return "polylsr";
    if (algo == "bfs" || algo == "bibfs") return algo;
    std::string out = algo;
    out += '+';
    out += heuristics::heuristic_name(heuristic);
    if (weight != 1.0) {
        std::ostringstream w;
        w << '(' << weight << ')';
        out += w.str();
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + (counter + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

long double uniform_unit(std::mt19937_64& rng) {
    return static_cast<long double>(rng()) / 18446744073709551616.0L;  // 2^64
}

// counts[i][rem] = number of ways to fill stacks i..w with rem objects, each
// stack holding 0..d. Every composition carries exactly n! arrangements, so
// sampling compositions by these weights and permuting objects is uniform
// over arrangements.
std::vector<std::vector<long double>> composition_counts(int w, int d, int n) {
    std::vector<std::vector<long double>> counts(
        w + 2, std::vector<long double>(n + 1, 0.0L));
    counts[w + 1][0] = 1.0L;
    for (int i = w; i >= 1; --i)
        for (int rem = 0; rem <= n; ++rem) {
            long double total = 0.0L;
            for (int c = 0; c <= std::min(d, rem); ++c)
                total += counts[i + 1][rem - c];
            counts[i][rem] = total;
        }
    return counts;
}

Arrangement sample_arrangement(const Setup& setup, std::mt19937_64& rng,
                               const std::vector<std::vector<long double>>& counts) {
    const int w = setup.w, d = setup.d, n = setup.n;
    std::vector<int> occupancy(w + 1, 0);
    int rem = n;
    for (int i = 1; i <= w; ++i) {
        const long double total = counts[i][rem];
        long double mark = uniform_unit(rng) * total;
        int chosen = std::min(d, rem);
        long double acc = 0.0L;
        for (int c = 0; c <= std::min(d, rem); ++c) {
            acc += counts[i + 1][rem - c];
            if (mark < acc) {
                chosen = c;
                break;
            }
        }
        occupancy[i] = chosen;
        rem -= chosen;
    }

    std::vector<ObjectId> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i + 1;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(uniform_below(rng, i + 1));
        std::swap(ids[i], ids[j]);
    }

    Arrangement out(w + 1);
    int next = 0;
    for (int s = 1; s <= w; ++s) {
        auto& st = out.mutable_stack(s);
        st.assign(ids.begin() + next, ids.begin() + next + occupancy[s]);
        next += occupancy[s];
    }
    return out;
}

}  // namespace

Instance generate_instance(const Setup& setup, std::uint64_t seed, Kind kind) {
    if (setup.w < 2 || setup.d < 1)
        throw std::invalid_argument("setup: need w >= 2 and d >= 1");
    if (setup.n < 1 || static_cast<long long>(setup.n) >
                           static_cast<long long>(setup.w) * setup.d)
        throw std::invalid_argument("setup: need 1 <= n <= w*d");
    const auto counts = composition_counts(setup.w, setup.d, setup.n);
    std::mt19937_64 rng_start(mix_seed(seed, 1));
    std::mt19937_64 rng_goal(mix_seed(seed, 2));

    Instance inst;
    inst.geometry = Geometry{setup.w + 1, setup.d};
    inst.n = setup.n;
    inst.kind = kind;
    inst.start = sample_arrangement(setup, rng_start, counts);
    inst.goal = sample_arrangement(setup, rng_goal, counts);
    validate_instance(inst);
    return inst;
}

long long counting_lower_bound(int w, int d) {
    if (w < 2 || d < 1)
        throw std::invalid_argument("counting_lower_bound: need w >= 2, d >= 1");
    const long double objects = static_cast<long double>(w) * d;
    const long double log_instances = std::lgamma(objects + 1.0L);
    const long double log_branching =
        std::log(static_cast<long double>(w) * (w + 1));
    return static_cast<long long>(
        std::ceil(log_instances / log_branching - 1e-9L));
}

int default_threads() {
    if (const char* env = std::getenv("STACKR_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    };
    std::vector<std::thread> pool;
    const int extra = std::min<int>(threads, static_cast<int>(count)) - 1;
    pool.reserve(extra > 0 ? extra : 0);
    for (int t = 0; t < extra; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

namespace {

InstanceResult run_one(const Instance& inst, const AlgoSpec& spec,
                       std::chrono::milliseconds timeout) {
    InstanceResult res;
    if (spec.algo == "polyd" || spec.algo == "polylsr") {
        Solution sol = spec.algo == "polyd" ? poly::poly_d_solve(inst)
                                            : poly::poly_lsr_solve(inst);
        res.solved = true;
        res.cost = sol.cost;
        res.expansions = 0;
        res.elapsed_ms = sol.stats.elapsed_ms;
        return res;
    }
    search::SearchConfig cfg;
    cfg.algorithm = search::algorithm_from_name(spec.algo);
    cfg.heuristic = spec.heuristic;
    cfg.weight = spec.weight;
    cfg.timeout = timeout;
    search::SolveOutcome out = search::solve(inst, cfg);
    res.solved = out.status == search::SolveStatus::Solved;
    res.cost = res.solved ? out.solution.cost : -1;
    res.expansions = out.stats.expansions;
    res.elapsed_ms = out.stats.elapsed_ms;
    return res;
}

}  // namespace

BenchReport run_matrix(const std::vector<Setup>& setups,
                       const std::vector<AlgoSpec>& specs,
                       std::chrono::milliseconds timeout, int threads) {
    BenchReport report;
    report.setups = setups;
    report.specs = specs;
    report.timeout_ms = static_cast<double>(timeout.count());
    if (setups.empty() || specs.empty()) return report;

    struct Task {
        int setup_index, instance_index, spec_index;
    };
    std::vector<Task> tasks;
    std::vector<std::vector<Instance>> instances(setups.size());
    for (std::size_t si = 0; si < setups.size(); ++si) {
        instances[si].reserve(setups[si].instance_count);
        for (int i = 0; i < setups[si].instance_count; ++i) {
            instances[si].push_back(
                generate_instance(setups[si], mix_seed(setups[si].seed, i)));
            for (std::size_t ai = 0; ai < specs.size(); ++ai)
                tasks.push_back(Task{static_cast<int>(si), i, static_cast<int>(ai)});
        }
    }

    report.rows.resize(tasks.size());
    parallel_for(tasks.size(), threads, [&](std::size_t ti) {
        const Task& t = tasks[ti];
        InstanceResult res =
            run_one(instances[t.setup_index][t.instance_index], specs[t.spec_index],
                    timeout);
        res.setup_index = t.setup_index;
        res.instance_index = t.instance_index;
        res.instance_seed = mix_seed(setups[t.setup_index].seed, t.instance_index);
        res.spec_index = t.spec_index;
        report.rows[ti] = res;
    });

    for (std::size_t si = 0; si < setups.size(); ++si) {
        for (std::size_t ai = 0; ai < specs.size(); ++ai) {
            CellStats cell;
            cell.setup_index = static_cast<int>(si);
            cell.spec_index = static_cast<int>(ai);
            double cost_sum = 0.0, exp_sum = 0.0, ms_sum = 0.0;
            for (const InstanceResult& row : report.rows) {
                if (row.setup_index != static_cast<int>(si) ||
                    row.spec_index != static_cast<int>(ai))
                    continue;
                ++cell.total;
                exp_sum += static_cast<double>(row.expansions);
                ms_sum += row.elapsed_ms;
                if (row.solved) {
                    ++cell.solved_count;
                    cost_sum += row.cost;
                }
                if (row.elapsed_ms >= 0.9 * report.timeout_ms) cell.unstable = true;
            }
            if (cell.total > 0) {
                cell.success_rate = 100.0 * cell.solved_count / cell.total;
                cell.mean_expansions = exp_sum / cell.total;
                cell.mean_elapsed_ms = ms_sum / cell.total;
                if (cell.solved_count > 0)
                    cell.avg_cost = cost_sum / cell.solved_count;
            }
            report.cells.push_back(cell);
        }
    }
    return report;
}

std::string instances_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "setup_w,setup_d,setup_n,instance_seed,algo,heuristic,weight,solved,"
           "cost,expansions,elapsed_ms\n";
    for (const InstanceResult& row : report.rows) {
        const Setup& s = report.setups[row.setup_index];
        const AlgoSpec& a = report.specs[row.spec_index];
        out << s.w << ',' << s.d << ',' << s.n << ',' << row.instance_seed << ','
            << a.algo << ',' << heuristics::heuristic_name(a.heuristic) << ','
            << a.weight << ',' << (row.solved ? 1 : 0) << ',';
        if (row.solved) out << row.cost;
        out << ',' << row.expansions << ',' << std::fixed << std::setprecision(3)
            << row.elapsed_ms << '\n';
        out.unsetf(std::ios::fixed);
        out << std::setprecision(6);
    }
    return out.str();
}

std::string aggregate_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "w,d,n,algo,heuristic,weight,success_rate,avg_cost,mean_expansions,"
           "mean_elapsed_ms,unstable\n";
    for (const CellStats& cell : report.cells) {
        const Setup& s = report.setups[cell.setup_index];
        const AlgoSpec& a = report.specs[cell.spec_index];
        out << s.w << ',' << s.d << ',' << s.n << ',' << a.algo << ','
            << heuristics::heuristic_name(a.heuristic) << ',' << a.weight << ','
            << cell.success_rate << ',';
        if (cell.avg_cost) out << *cell.avg_cost;
        out << ',' << cell.mean_expansions << ',' << cell.mean_elapsed_ms << ','
            << (cell.unstable ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string aggregate_text(const BenchReport& report) {
    // One row per setup, one average-cost column per algorithm; values with
    // partial success are starred, NA when nothing solved.
    std::vector<std::string> headers = {"w", "d", "n"};
    for (const AlgoSpec& spec : report.specs) headers.push_back(spec.label());
    std::vector<std::vector<std::string>> rows;
    for (std::size_t si = 0; si < report.setups.size(); ++si) {
        const Setup& s = report.setups[si];
        std::vector<std::string> row = {std::to_string(s.w), std::to_string(s.d),
                                        std::to_string(s.n)};
        for (std::size_t ai = 0; ai < report.specs.size(); ++ai) {
            const CellStats& cell = report.cells[si * report.specs.size() + ai];
            if (!cell.avg_cost) {
                row.push_back("NA");
            } else {
                std::ostringstream v;
                v << std::fixed << std::setprecision(2) << *cell.avg_cost;
                if (cell.solved_count < cell.total) v << '*';
                row.push_back(v.str());
            }
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        width[c] = headers[c].size();
        for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << row[c];
        out << '\n';
    };
    emit(headers);
    for (const auto& row : rows) emit(row);
    return out.str();
}

std::vector<std::pair<std::string, std::string>> plot_series(
    const BenchReport& report) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t ai = 0; ai < report.specs.size(); ++ai) {
        std::string name = report.specs[ai].label();
        for (char& ch : name)
            if (ch == '+' || ch == '(' || ch == ')' || ch == '.') ch = '_';
        std::ostringstream body;
        body << "# n success_rate (" << report.specs[ai].label() << ")\n";
        for (std::size_t si = 0; si < report.setups.size(); ++si) {
            const CellStats& cell = report.cells[si * report.specs.size() + ai];
            body << report.setups[si].n << ' ' << cell.success_rate << '\n';
        }
        out.emplace_back(std::move(name), body.str());
    }
    return out;
}

}  // namespace stackr::bench
