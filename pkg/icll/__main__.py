from icll.main import run

run()
