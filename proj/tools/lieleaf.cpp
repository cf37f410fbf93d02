#include <lieleaf/cli.hpp>

#include <CLI11.hpp>

int main(int argc, char** argv) {
  using namespace lieleaf::cli;
  RunConfig cfg;
  std::string box, sample, points, start;

  std::string commandList;
  for (const auto& c : commands()) commandList += (commandList.empty() ? "" : ", ") + c;

  CLI::App app{"Lie-Poisson leaf workbench: checks and leaf traces for a Lie algebroid spec"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.add_option("--spec", cfg.specPath, "Spec file (JSON)")->required();
  app.add_option("--cmd", cfg.command, "One of: " + commandList)->required();
  app.add_option("--seed", cfg.seed, "Seed for sampling and leaf tracing")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Check tolerance")->capture_default_str();
  app.add_option("--drift-tol", cfg.driftTol, "Tolerance for invariant drift along traces")->capture_default_str();
  app.add_option("--h", cfg.stepSize, "RK4 step size")->capture_default_str();
  app.add_option("--steps", cfg.steps, "Total RK4 steps per trace")->capture_default_str();
  app.add_option("--steps-per-flow", cfg.stepsPerFlow, "Steps per random generator flow")->capture_default_str();
  app.add_option("--box", box, "Chart box LO,HI (default -10,10)");
  app.add_option("--sample", sample, "Sampling box LO,HI for random points (default -1,1)");
  app.add_option("--points", points, "Sample points: PATH or random:N (default random:100)");
  app.add_option("--start", start, "Trace start x..,xi.. (default: checks.start in the spec)");
  app.add_option("--out", cfg.outPath, "JSON report path (default stdout)");
  app.add_option("--csv", cfg.csvPath, "Trace CSV path (default: --out with .csv extension)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (!box.empty()) cfg.box = parseBox(box, "--box");
    if (!sample.empty()) cfg.sampleBox = parseBox(sample, "--sample");
    if (!points.empty()) cfg.points = parsePointSource(points);
    if (!start.empty()) cfg.start = parseNumberList(start, "--start");
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return run(cfg);
}
