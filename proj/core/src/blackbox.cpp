#include "egbm/blackbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <sstream>

#include "egbm/dataset.hpp"
#include "egbm/error.hpp"
#include "egbm/trainer.hpp"

namespace egbm {

Eigen::VectorXd checked_query(BlackBox& blackbox, const Eigen::MatrixXd& rows) {
  Eigen::VectorXd out = blackbox.query(rows);
  if (out.size() != rows.rows()) {
    throw AdapterError("black box returned " + std::to_string(out.size()) + " predictions for " +
                       std::to_string(rows.rows()) + " rows");
  }
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out(i))) throw AdapterError("black box returned a non-finite value for row " + std::to_string(i + 1));
  }
  return out;
}

std::string batch_to_csv(const Eigen::MatrixXd& rows, const std::vector<std::string>& feature_names) {
  if (static_cast<Eigen::Index>(feature_names.size()) != rows.cols()) {
    throw AdapterError("batch has " + std::to_string(rows.cols()) + " columns but " +
                       std::to_string(feature_names.size()) + " feature names");
  }
  std::string out;
  for (std::size_t j = 0; j < feature_names.size(); ++j) out += (j ? "," : "") + feature_names[j];
  out += "\n";
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) out += (j ? "," : "") + format_double(rows(i, j));
    out += "\n";
  }
  return out;
}

std::vector<double> parse_prediction_lines(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const std::string token = line.substr(start);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE) {
      throw AdapterError("black box output line " + std::to_string(line_no) + " is not a number: '" + token + "'");
    }
    values.push_back(v);
  }
  return values;
}

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe(fd) != 0) throw AdapterError(std::string("pipe failed: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;
  void close_read() {
    if (fd[0] >= 0) ::close(fd[0]);
    fd[0] = -1;
  }
  void close_write() {
    if (fd[1] >= 0) ::close(fd[1]);
    fd[1] = -1;
  }
};

struct ProcessOutput {
  int status = 0;
  std::string out;
  std::string err;
};

// Blocks SIGPIPE on the calling thread while a child may close its stdin early,
// and discards a SIGPIPE raised in that window.
class SigpipeGuard {
 public:
  SigpipeGuard() {
    sigemptyset(&pipe_set_);
    sigaddset(&pipe_set_, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &pipe_set_, &old_);
  }
  ~SigpipeGuard() {
    const timespec zero{0, 0};
    while (sigtimedwait(&pipe_set_, nullptr, &zero) > 0) {
    }
    pthread_sigmask(SIG_SETMASK, &old_, nullptr);
  }

 private:
  sigset_t pipe_set_;
  sigset_t old_;
};

ProcessOutput run_process(const std::string& command, const std::string& input) {
  Pipe in, out, err;
  SigpipeGuard guard;
  const pid_t pid = ::fork();
  if (pid < 0) throw AdapterError(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in.fd[0], STDIN_FILENO);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(err.fd[1], STDERR_FILENO);
    for (int fd : {in.fd[0], in.fd[1], out.fd[0], out.fd[1], err.fd[0], err.fd[1]}) ::close(fd);
    sigset_t none;
    sigemptyset(&none);
    pthread_sigmask(SIG_SETMASK, &none, nullptr);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  in.close_read();
  out.close_write();
  err.close_write();
  ::fcntl(in.fd[1], F_SETFL, ::fcntl(in.fd[1], F_GETFL) | O_NONBLOCK);

  ProcessOutput result;
  std::size_t written = 0;
  if (input.empty()) in.close_write();
  char buf[65536];
  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    pollfd fds[3];
    nfds_t count = 0;
    auto add = [&](int fd, short events) {
      if (fd >= 0) fds[count++] = {fd, events, 0};
    };
    add(in.fd[1], POLLOUT);
    add(out.fd[0], POLLIN);
    add(err.fd[0], POLLIN);
    if (::poll(fds, count, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (nfds_t i = 0; i < count; ++i) {
      if (fds[i].revents == 0) continue;
      if (fds[i].fd == in.fd[1]) {
        const ssize_t n = ::write(in.fd[1], input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if ((n < 0 && errno != EAGAIN && errno != EINTR) || written == input.size()) in.close_write();
      } else {
        const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
        if (n > 0) {
          (fds[i].fd == out.fd[0] ? result.out : result.err).append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
          if (fds[i].fd == out.fd[0]) {
            out.close_read();
          } else {
            err.close_read();
          }
        }
      }
    }
  }
  in.close_write();
  while (::waitpid(pid, &result.status, 0) < 0 && errno == EINTR) {
  }
  return result;
}

}  // namespace

ProcessBlackBox::ProcessBlackBox(std::string command, std::vector<std::string> feature_names)
    : command_(std::move(command)), feature_names_(std::move(feature_names)) {
  if (command_.empty()) throw AdapterError("black box command is empty");
}

Eigen::VectorXd ProcessBlackBox::query(const Eigen::MatrixXd& rows) {
  const ProcessOutput result = run_process(command_, batch_to_csv(rows, feature_names_));
  if (!WIFEXITED(result.status) || WEXITSTATUS(result.status) != 0) {
    const std::string how = WIFEXITED(result.status) ? "exited with status " + std::to_string(WEXITSTATUS(result.status))
                                                     : "terminated by a signal";
    std::string diag = result.err.substr(0, 2000);
    while (!diag.empty() && (diag.back() == '\n' || diag.back() == '\r')) diag.pop_back();
    throw AdapterError("black box command '" + command_ + "' " + how + (diag.empty() ? "" : ": " + diag));
  }
  const std::vector<double> values = parse_prediction_lines(result.out);
  if (static_cast<Eigen::Index>(values.size()) != rows.rows()) {
    throw AdapterError("black box printed " + std::to_string(values.size()) + " lines for " +
                       std::to_string(rows.rows()) + " rows");
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::unique_ptr<BlackBox> external_process_adapter(const std::string& command, std::vector<std::string> feature_names) {
  return std::make_unique<ProcessBlackBox>(command, std::move(feature_names));
}

std::unique_ptr<BlackBox> linear_blackbox(Eigen::VectorXd coefficients) {
  return std::make_unique<FunctionBlackBox>([c = std::move(coefficients)](const Eigen::MatrixXd& rows) {
    if (rows.cols() != c.size()) throw AdapterError("linear black box: wrong column count");
    return Eigen::VectorXd(rows * c);
  });
}

double ChessboardProbability::operator()(double x1, double x2) const {
  const double pi = std::numbers::pi;
  const double s = std::sin(pi * cells * x1) * std::sin(pi * cells * x2);
  return sigmoid((black_is_even ? 1.0 : -1.0) * sharpness * s);
}

std::unique_ptr<BlackBox> chessboard_blackbox(ChessboardProbability board) {
  return std::make_unique<FunctionBlackBox>([board](const Eigen::MatrixXd& rows) {
    if (rows.cols() != 2) throw AdapterError("chessboard black box expects 2 columns");
    Eigen::VectorXd out(rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) out(i) = board(rows(i, 0), rows(i, 1));
    return out;
  });
}

}  // namespace egbm
