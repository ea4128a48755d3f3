from qforge.main import main

main()
