from ldp_toolkit.cli.app import main

main()
