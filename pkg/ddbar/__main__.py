from ddbar.main import main

main()
