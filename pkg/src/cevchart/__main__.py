from cevchart.cli import main

main()
