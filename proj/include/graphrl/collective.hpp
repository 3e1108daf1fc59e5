#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <typeindex>
#include <vector>

namespace graphrl {

// In-process worker group standing in for a GPU collective library.
//
// Each of the P workers is a thread running the same body in lockstep. The
// only synchronisation points are the collectives below; every rank must
// enter each collective exactly once per logical step with agreeing shapes.
// Reductions are performed in ascending rank order by every rank on its own
// copy of the inputs, so all ranks receive bitwise identical results.

class CollectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CollectiveTimeout : public CollectiveError {
public:
    using CollectiveError::CollectiveError;
};

enum class CollectiveOp { all_reduce_sum, all_gather, barrier };

const char* to_string(CollectiveOp op);

struct CollectiveCounters {
    std::uint64_t all_reduce_calls = 0;
    std::uint64_t all_reduce_elements = 0;
    std::uint64_t all_reduce_bytes = 0;
    std::uint64_t all_gather_calls = 0;
    std::uint64_t all_gather_elements = 0;  // elements of the gathered result
    std::uint64_t all_gather_bytes = 0;
    std::uint64_t barrier_calls = 0;

    CollectiveCounters operator-(const CollectiveCounters& earlier) const;
};

// One logical collective as seen by every rank.
struct CollectiveRecord {
    CollectiveOp op = CollectiveOp::barrier;
    std::size_t elements = 0;
};

class Communicator;

class WorkerGroup {
public:
    explicit WorkerGroup(int num_workers,
                         std::chrono::milliseconds timeout = std::chrono::seconds(30));
    ~WorkerGroup();
    WorkerGroup(const WorkerGroup&) = delete;
    WorkerGroup& operator=(const WorkerGroup&) = delete;

    [[nodiscard]] int size() const { return num_workers_; }
    [[nodiscard]] std::chrono::milliseconds timeout() const { return timeout_; }

    // Runs body on every rank, rank 0 on the calling thread, and returns once
    // all ranks finished. If any rank throws, the others are released from
    // pending collectives and the first exception is rethrown here.
    void run(const std::function<void(Communicator&)>& body);

    [[nodiscard]] CollectiveCounters counters() const;
    void reset_counters();

    // When enabled, every logical collective is appended to records().
    void set_recording(bool enabled);
    [[nodiscard]] std::vector<CollectiveRecord> records() const;

    struct Shared;

private:
    int num_workers_;
    std::chrono::milliseconds timeout_;
    std::unique_ptr<Shared> shared_;
};

class Communicator {
public:
    [[nodiscard]] int rank() const { return rank_; }
    [[nodiscard]] int size() const { return size_; }

    // Elementwise sum over ranks; every rank passes the same length.
    template <typename T>
    std::vector<T> all_reduce_sum(std::span<const T> local);

    // Concatenation along the node axis. The local array is viewed as
    // `outer` rows of local.size()/outer elements; the result holds, for each
    // outer row, the rank-ordered concatenation of every rank's row.
    template <typename T>
    std::vector<T> all_gather(std::span<const T> local, std::size_t outer = 1);

    template <typename T>
    std::vector<T> all_reduce_sum(const std::vector<T>& local) {
        return all_reduce_sum(std::span<const T>(local));
    }
    template <typename T>
    std::vector<T> all_gather(const std::vector<T>& local, std::size_t outer = 1) {
        return all_gather(std::span<const T>(local), outer);
    }

    void barrier();

    struct Contribution {
        const void* data = nullptr;
        std::size_t count = 0;
        std::size_t outer = 1;
    };

private:
    friend class WorkerGroup;
    Communicator(WorkerGroup::Shared& shared, int rank, int size)
        : shared_(&shared), rank_(rank), size_(size) {}

    using Combine = std::function<void(std::span<const Contribution>)>;
    void exchange(CollectiveOp op, std::type_index type, std::size_t elem_size,
                  Contribution mine, const Combine& combine);

    WorkerGroup::Shared* shared_;
    int rank_;
    int size_;
};

template <typename T>
std::vector<T> Communicator::all_reduce_sum(std::span<const T> local) {
    std::vector<T> out;
    exchange(CollectiveOp::all_reduce_sum, typeid(T), sizeof(T), {local.data(), local.size(), 1},
             [&](std::span<const Contribution> parts) {
                 const auto* first = static_cast<const T*>(parts[0].data);
                 out.assign(first, first + parts[0].count);
                 for (std::size_t r = 1; r < parts.size(); ++r) {
                     const auto* src = static_cast<const T*>(parts[r].data);
                     for (std::size_t i = 0; i < out.size(); ++i) out[i] += src[i];
                 }
             });
    return out;
}

template <typename T>
std::vector<T> Communicator::all_gather(std::span<const T> local, std::size_t outer) {
    std::vector<T> out;
    exchange(CollectiveOp::all_gather, typeid(T), sizeof(T), {local.data(), local.size(), outer},
             [&](std::span<const Contribution> parts) {
                 std::size_t total = 0;
                 for (const auto& p : parts) total += p.count;
                 out.resize(total);
                 auto* dst = out.data();
                 for (std::size_t row = 0; row < outer; ++row) {
                     for (const auto& p : parts) {
                         const std::size_t width = p.count / outer;
                         const auto* src = static_cast<const T*>(p.data) + row * width;
                         dst = std::copy(src, src + width, dst);
                     }
                 }
             });
    return out;
}

}  // namespace graphrl
