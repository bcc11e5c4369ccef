from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Import the command group
from app.main import cli

if __name__ == "__main__":
    cli()
