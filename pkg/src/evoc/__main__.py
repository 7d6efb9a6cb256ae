from evoc.cli_io import main

main()
