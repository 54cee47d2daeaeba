"""Configuration, built-in suites, reporting and the command line."""
