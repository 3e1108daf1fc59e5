#include "graphrl/collective.hpp"

#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace graphrl {

const char* to_string(CollectiveOp op) {
    switch (op) {
        case CollectiveOp::all_reduce_sum: return "all_reduce_sum";
        case CollectiveOp::all_gather: return "all_gather";
        case CollectiveOp::barrier: return "barrier";
    }
    return "unknown";
}

CollectiveCounters CollectiveCounters::operator-(const CollectiveCounters& e) const {
    return {all_reduce_calls - e.all_reduce_calls,   all_reduce_elements - e.all_reduce_elements,
            all_reduce_bytes - e.all_reduce_bytes,   all_gather_calls - e.all_gather_calls,
            all_gather_elements - e.all_gather_elements, all_gather_bytes - e.all_gather_bytes,
            barrier_calls - e.barrier_calls};
}

struct WorkerGroup::Shared {
    struct Slot {
        Communicator::Contribution contribution;
        CollectiveOp op = CollectiveOp::barrier;
        std::optional<std::type_index> type;
    };

    explicit Shared(int n, std::chrono::milliseconds t) : size(n), timeout(t), slots(n) {}

    int size;
    std::chrono::milliseconds timeout;

    std::mutex mu;
    std::condition_variable cv;
    std::uint64_t generation = 0;
    int arrived = 0;
    bool aborted = false;
    std::string abort_reason;
    std::exception_ptr first_error;
    std::vector<Slot> slots;

    CollectiveCounters counters;
    bool recording = false;
    std::vector<CollectiveRecord> records;

    void reset_run() {
        arrived = 0;
        aborted = false;
        abort_reason.clear();
        first_error = nullptr;
    }

    // Blocks until all ranks arrived. Caller holds `lock`.
    void rendezvous(std::unique_lock<std::mutex>& lock, int rank, const char* what) {
        if (aborted) throw CollectiveError("rank " + std::to_string(rank) + " in " + what + ": " + abort_reason);
        const auto gen = generation;
        if (++arrived == size) {
            arrived = 0;
            ++generation;
            cv.notify_all();
            return;
        }
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        while (generation == gen && !aborted) {
            if (cv.wait_until(lock, deadline) == std::cv_status::timeout && generation == gen &&
                !aborted) {
                const std::string reason =
                    std::string("timeout in ") + what + " after " + std::to_string(timeout.count()) +
                    " ms: rank " + std::to_string(rank) + " waited, " + std::to_string(arrived) +
                    " of " + std::to_string(size) + " ranks arrived";
                aborted = true;
                abort_reason = reason;
                if (!first_error) first_error = std::make_exception_ptr(CollectiveTimeout(reason));
                cv.notify_all();
                throw CollectiveTimeout(reason);
            }
        }
        if (generation == gen) {
            throw CollectiveError("rank " + std::to_string(rank) + " in " + what + ": " + abort_reason);
        }
    }

    void count(CollectiveOp op, std::size_t elements, std::size_t elem_size) {
        switch (op) {
            case CollectiveOp::all_reduce_sum:
                ++counters.all_reduce_calls;
                counters.all_reduce_elements += elements;
                counters.all_reduce_bytes += elements * elem_size;
                break;
            case CollectiveOp::all_gather:
                ++counters.all_gather_calls;
                counters.all_gather_elements += elements;
                counters.all_gather_bytes += elements * elem_size;
                break;
            case CollectiveOp::barrier: ++counters.barrier_calls; break;
        }
        if (recording) records.push_back({op, elements});
    }
};

WorkerGroup::WorkerGroup(int num_workers, std::chrono::milliseconds timeout)
    : num_workers_(num_workers), timeout_(timeout) {
    if (num_workers < 1) throw std::invalid_argument("WorkerGroup needs at least one worker");
    shared_ = std::make_unique<Shared>(num_workers, timeout);
}

WorkerGroup::~WorkerGroup() = default;

void WorkerGroup::run(const std::function<void(Communicator&)>& body) {
    {
        std::lock_guard lock(shared_->mu);
        shared_->reset_run();
    }
    auto guarded = [this, &body](int rank) {
        Communicator comm(*shared_, rank, num_workers_);
        try {
            body(comm);
        } catch (...) {
            std::lock_guard lock(shared_->mu);
            if (!shared_->first_error) shared_->first_error = std::current_exception();
            if (!shared_->aborted) {
                shared_->aborted = true;
                shared_->abort_reason = "aborted because rank " + std::to_string(rank) + " failed";
            }
            shared_->cv.notify_all();
        }
    };
    {
        std::vector<std::jthread> threads;
        threads.reserve(static_cast<std::size_t>(num_workers_ - 1));
        for (int rank = 1; rank < num_workers_; ++rank) threads.emplace_back(guarded, rank);
        guarded(0);
    }
    std::exception_ptr error;
    {
        std::lock_guard lock(shared_->mu);
        error = shared_->first_error;
    }
    if (error) std::rethrow_exception(error);
}

CollectiveCounters WorkerGroup::counters() const {
    std::lock_guard lock(shared_->mu);
    return shared_->counters;
}

void WorkerGroup::reset_counters() {
    std::lock_guard lock(shared_->mu);
    shared_->counters = {};
    shared_->records.clear();
}

void WorkerGroup::set_recording(bool enabled) {
    std::lock_guard lock(shared_->mu);
    shared_->recording = enabled;
}

std::vector<CollectiveRecord> WorkerGroup::records() const {
    std::lock_guard lock(shared_->mu);
    return shared_->records;
}

void Communicator::exchange(CollectiveOp op, std::type_index type, std::size_t elem_size,
                            Contribution mine, const Combine& combine) {
    const char* what = to_string(op);
    if (mine.outer == 0 || mine.count % mine.outer != 0) {
        throw CollectiveError(std::string(what) + ": local length " + std::to_string(mine.count) +
                              " is not a multiple of outer extent " + std::to_string(mine.outer));
    }
    auto& sh = *shared_;
    if (size_ == 1) {
        combine(std::span<const Contribution>(&mine, 1));
        std::lock_guard lock(sh.mu);
        sh.count(op, op == CollectiveOp::barrier ? 0 : mine.count, elem_size);
        return;
    }

    std::unique_lock lock(sh.mu);
    sh.slots[rank_] = {mine, op, type};
    sh.rendezvous(lock, rank_, what);

    // Every rank validates the same slots, so every rank reaches the same verdict.
    std::string mismatch;
    std::vector<Contribution> parts;
    parts.reserve(sh.slots.size());
    std::size_t total = 0;
    for (int r = 0; r < size_; ++r) {
        const auto& slot = sh.slots[r];
        if (slot.op != op || slot.type != type) {
            mismatch = "rank " + std::to_string(r) + " entered " + to_string(slot.op) +
                       " with a different element type while rank " + std::to_string(rank_) +
                       " entered " + what;
        } else if (op == CollectiveOp::all_reduce_sum && slot.contribution.count != mine.count) {
            mismatch = "shape mismatch: rank " + std::to_string(r) + " passed " +
                       std::to_string(slot.contribution.count) + " elements, rank " +
                       std::to_string(rank_) + " passed " + std::to_string(mine.count);
        } else if (op == CollectiveOp::all_gather && slot.contribution.outer != mine.outer) {
            mismatch = "shape mismatch: rank " + std::to_string(r) + " gathers with outer extent " +
                       std::to_string(slot.contribution.outer) + ", rank " +
                       std::to_string(rank_) + " with " + std::to_string(mine.outer);
        }
        parts.push_back(slot.contribution);
        total += slot.contribution.count;
    }
    lock.unlock();

    if (mismatch.empty()) combine(parts);

    lock.lock();
    if (rank_ == 0 && mismatch.empty()) {
        sh.count(op, op == CollectiveOp::all_reduce_sum ? mine.count : total, elem_size);
    }
    sh.rendezvous(lock, rank_, what);
    if (!mismatch.empty()) throw CollectiveError(std::string(what) + ": " + mismatch);
}

void Communicator::barrier() {
    exchange(CollectiveOp::barrier, typeid(void), 0, {nullptr, 0, 1},
             [](std::span<const Contribution>) {});
}

}  // namespace graphrl
