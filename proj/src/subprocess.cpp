#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "mobo/objectives.hpp"

namespace mobo {

namespace {

// One child process speaking the newline-delimited JSON protocol.
// Evaluations are serialized under a mutex: one request in flight.
class LineProtocolChild {
public:
    LineProtocolChild(const std::string& command, double timeout_seconds)
        : command_(command), timeout_seconds_(timeout_seconds) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw EvaluationError("subprocess: pipe() failed: " + std::string(strerror(errno)));
        }
        pid_ = fork();
        if (pid_ < 0) {
            throw EvaluationError("subprocess: fork() failed: " + std::string(strerror(errno)));
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
        signal(SIGPIPE, SIG_IGN);
    }

    ~LineProtocolChild() {
        if (stdin_fd_ >= 0) close(stdin_fd_);
        if (stdout_fd_ >= 0) close(stdout_fd_);
        if (pid_ > 0) {
            int status = 0;
            // Give the child a moment to exit on EOF, then force it.
            for (int i = 0; i < 50; ++i) {
                if (waitpid(pid_, &status, WNOHANG) != 0) return;
                usleep(10000);
            }
            kill(pid_, SIGKILL);
            waitpid(pid_, &status, 0);
        }
    }

    Eigen::VectorXd evaluate(const Eigen::VectorXd& x, int num_objectives) {
        std::lock_guard<std::mutex> lock(mutex_);
        nlohmann::json request;
        request["x"] = std::vector<double>(x.begin(), x.end());
        std::string line = request.dump();
        line.push_back('\n');
        write_all(line);
        const std::string response = read_line();

        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(response);
        } catch (const nlohmann::json::exception&) {
            throw EvaluationError("subprocess: malformed response line: " + response);
        }
        if (!parsed.contains("y") || !parsed["y"].is_array()) {
            throw EvaluationError("subprocess: response missing \"y\" array: " + response);
        }
        const auto& arr = parsed["y"];
        if (static_cast<int>(arr.size()) != num_objectives) {
            throw EvaluationError("subprocess: expected " + std::to_string(num_objectives) +
                                  " objective values, got " + std::to_string(arr.size()));
        }
        Eigen::VectorXd y(num_objectives);
        for (int k = 0; k < num_objectives; ++k) {
            if (!arr[static_cast<size_t>(k)].is_number()) {
                throw EvaluationError("subprocess: non-numeric objective value in: " + response);
            }
            y[k] = arr[static_cast<size_t>(k)].get<double>();
        }
        return y;
    }

private:
    void write_all(const std::string& data) {
        size_t written = 0;
        while (written < data.size()) {
            ssize_t n = write(stdin_fd_, data.data() + written, data.size() - written);
            if (n <= 0) {
                throw EvaluationError("subprocess: child closed its input (exited?)");
            }
            written += static_cast<size_t>(n);
        }
    }

    std::string read_line() {
        const int timeout_ms = static_cast<int>(timeout_seconds_ * 1000.0);
        std::string line;
        while (true) {
            auto newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                line = buffer_.substr(0, newline);
                buffer_.erase(0, newline + 1);
                return line;
            }
            struct pollfd pfd{stdout_fd_, POLLIN, 0};
            int ready = poll(&pfd, 1, timeout_ms);
            if (ready == 0) {
                throw EvaluationError("subprocess: timed out after " +
                                      std::to_string(timeout_seconds_) + "s waiting for response");
            }
            if (ready < 0) {
                throw EvaluationError("subprocess: poll failed: " + std::string(strerror(errno)));
            }
            char chunk[4096];
            ssize_t n = read(stdout_fd_, chunk, sizeof(chunk));
            if (n <= 0) {
                throw EvaluationError("subprocess: child exited before responding");
            }
            buffer_.append(chunk, static_cast<size_t>(n));
        }
    }

    std::string command_;
    double timeout_seconds_;
    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
    std::mutex mutex_;
};

} // namespace

ObjectiveSet subprocess_objective(const std::string& command, int num_objectives, int dim,
                                  double timeout_seconds) {
    if (num_objectives < 1 || dim < 1) {
        throw ContractError("subprocess_objective: K and d must be >= 1");
    }
    auto child = std::make_shared<LineProtocolChild>(command, timeout_seconds);

    ObjectiveSet set;
    set.name = "subprocess";
    set.num_objectives = num_objectives;
    set.dim = dim;
    set.supports_oracle = false;
    set.evaluate = [child, num_objectives, dim](const Eigen::VectorXd& x) {
        if (x.size() != dim) {
            throw ContractError("subprocess_objective: point dimension mismatch");
        }
        return child->evaluate(x, num_objectives);
    };
    set.noise_stds = Eigen::VectorXd::Zero(num_objectives);
    return set;
}

} // namespace mobo
