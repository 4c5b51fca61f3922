#include <exception>
#include <iostream>

#include "cli/job.hpp"
#include "cli/run.hpp"
#include "extrap/io.hpp"
#include "extrap/verifier/translates.hpp"

int main(int argc, char** argv) {
  using namespace extrap::cli;
  try {
    const auto job = parse_command_line(argc, argv);
    if (!job) return kPass;
    const Report report = run(*job);
    emit(report, *job, std::cout);
    return report.exit_code();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const extrap::io::FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsageError;
  } catch (const extrap::verifier::TranslationStalled& e) {
    std::cerr << e.what() << "\n";
    return kAssertionFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertionFailure;
  }
}
