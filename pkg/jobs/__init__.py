# Jobs package: one module per CLI subcommand.
