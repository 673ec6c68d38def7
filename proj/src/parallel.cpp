#include "catseye/parallel.h"
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace catseye {

int worker_count()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if(n < 1) n = 1;
    if(const char* env = std::getenv("CATSEYE_THREADS")) {
        int cap = std::atoi(env);
        if(cap > 0) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    std::size_t nthreads = std::min<std::size_t>(worker_count(), n);
    if(nthreads <= 1) {
        for(std::size_t i = 0; i < n; i++) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex errorMutex;
    auto worker = [&]() {
        for(std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch(...) {
                std::lock_guard<std::mutex> lock(errorMutex);
                if(!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for(std::size_t t = 0; t < nthreads; t++) pool.emplace_back(worker);
    for(auto& th: pool) th.join();
    if(error) std::rethrow_exception(error);
}

}  // namespace catseye
