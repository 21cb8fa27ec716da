#include <exception>
#include <iostream>

#include "cli.hpp"

int main(int argc, char **argv)
{
  try
  {
    const auto cfg = helmadr::cli::parse_config(argc, argv);
    if (!cfg)
    {
      return 0;
    }
    return helmadr::cli::run_experiment(*cfg);
  }
  catch (const helmadr::cli::CliError &e)
  {
    std::cerr << e.what() << '\n';
    return e.exit_code;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
