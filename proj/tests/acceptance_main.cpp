// One PASS/FAIL line per acceptance criterion. Criteria 1-9 run in process;
// criterion 10 runs `llab verify` twice and compares the reports byte for byte.

#include "llab/acceptance.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_verify(const std::string& cli, const std::string& out) {
    const std::string cmd = "\"" + cli + "\" verify --out \"" + out + "\" > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    const auto report = llab::run_acceptance(llab::kDefaultAcceptanceSeed, &std::cerr);
    bool all = report.passed();
    for (const auto& c : report.criteria) {
        std::cout << "criterion " << c.id << " " << (c.passed() ? "PASS" : "FAIL") << " " << c.name << " :: "
                  << c.detail << "\n";
    }

    if (argc < 3) {
        std::cout << "criterion 10 FAIL reproducibility :: usage: llab_acceptance CLI WORKDIR\n";
        return 1;
    }
    const std::string cli = argv[1];
    const std::string first = std::string(argv[2]) + "/verify_first.txt";
    const std::string second = std::string(argv[2]) + "/verify_second.txt";
    const int s1 = run_verify(cli, first);
    const int s2 = run_verify(cli, second);
    const std::string a = slurp(first), b = slurp(second);
    const bool same = !a.empty() && a == b;
    const bool ok10 = same && s1 == 0 && s2 == 0;
    std::ostringstream detail;
    detail << "exit statuses " << s1 << "," << s2 << "; reports " << (same ? "byte-identical" : "differ") << " ("
           << a.size() << " bytes)";
    std::cout << "criterion 10 " << (ok10 ? "PASS" : "FAIL") << " reproducibility :: " << detail.str() << "\n";
    all = all && ok10;
    std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
    return all ? 0 : 1;
}
